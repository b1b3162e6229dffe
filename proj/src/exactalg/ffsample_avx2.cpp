// Built with -mavx2; only reached through select_kernel() after a CPU check.
#include "hodgejet/exactalg/ffsample.hpp"

#if defined(__x86_64__)
#include <immintrin.h>

#include <algorithm>

namespace hodgejet::ff {

namespace {

// Eight independent Montgomery products. Even and odd 32-bit lanes go
// through _mm256_mul_epu32 separately and are blended back.
inline __m256i mont_mul8(__m256i a, __m256i b, __m256i p, __m256i neg_pinv) {
  const __m256i t_even = _mm256_mul_epu32(a, b);
  const __m256i t_odd = _mm256_mul_epu32(_mm256_srli_epi64(a, 32), _mm256_srli_epi64(b, 32));
  const __m256i m_even = _mm256_mul_epu32(t_even, neg_pinv);
  const __m256i m_odd = _mm256_mul_epu32(t_odd, neg_pinv);
  const __m256i u_even = _mm256_srli_epi64(_mm256_add_epi64(t_even, _mm256_mul_epu32(m_even, p)), 32);
  const __m256i u_odd = _mm256_add_epi64(t_odd, _mm256_mul_epu32(m_odd, p));
  const __m256i u = _mm256_blend_epi32(u_even, u_odd, 0b10101010);
  return _mm256_min_epu32(u, _mm256_sub_epi32(u, p));
}

inline __m256i add8(__m256i a, __m256i b, __m256i p) {
  const __m256i s = _mm256_add_epi32(a, b);
  return _mm256_min_epu32(s, _mm256_sub_epi32(s, p));
}

}  // namespace

void eval_batch_avx2(const CompiledPoly& poly, const Montgomery& mg, std::span<const std::uint32_t> soa,
                     std::size_t count, std::span<std::uint32_t> out) {
  const __m256i p = _mm256_set1_epi32(static_cast<int>(mg.p));
  const __m256i npi = _mm256_set1_epi32(static_cast<int>(mg.neg_pinv));
  const std::size_t nterms = poly.coeffs.size();
  const std::size_t full = count - count % 8;
  for (std::size_t k = 0; k < full; k += 8) {
    __m256i acc = _mm256_setzero_si256();
    for (std::size_t t = 0; t < nterms; ++t) {
      __m256i prod = _mm256_set1_epi32(static_cast<int>(poly.coeffs[t]));
      for (std::size_t v = 0; v < poly.nvars; ++v) {
        const std::uint16_t e = poly.exps[t * poly.nvars + v];
        if (!e) continue;
        const __m256i x =
            _mm256_loadu_si256(reinterpret_cast<const __m256i*>(soa.data() + v * count + k));
        for (std::uint16_t i = 0; i < e; ++i) prod = mont_mul8(prod, x, p, npi);
      }
      acc = add8(acc, prod, p);
    }
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out.data() + k), acc);
  }
  // Tail lanes: scalar arithmetic identical to the reference kernel.
  for (std::size_t k = full; k < count; ++k) {
    std::uint32_t acc = 0;
    for (std::size_t t = 0; t < nterms; ++t) {
      std::uint32_t prod = poly.coeffs[t];
      for (std::size_t v = 0; v < poly.nvars; ++v) {
        const std::uint32_t x = soa[v * count + k];
        for (std::uint16_t e = poly.exps[t * poly.nvars + v]; e > 0; --e) prod = mg.mul(prod, x);
      }
      acc = mg.add(acc, prod);
    }
    out[k] = acc;
  }
}

}  // namespace hodgejet::ff

#endif
