#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hodgejet/exactalg/poly.hpp"

namespace hodgejet::ff {

/// Large prime used by the evidence sampler (2^31 - 1).
inline constexpr std::uint32_t kPrime = 2147483647u;

/// Montgomery arithmetic modulo an odd p < 2^31 with R = 2^32.
struct Montgomery {
  explicit Montgomery(std::uint32_t p = kPrime);

  std::uint32_t p;
  std::uint32_t neg_pinv;  // -p^{-1} mod 2^32
  std::uint32_t r2;        // R^2 mod p

  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    const std::uint64_t t = std::uint64_t{a} * b;
    const std::uint32_t m = static_cast<std::uint32_t>(t) * neg_pinv;
    const std::uint32_t u = static_cast<std::uint32_t>((t + std::uint64_t{m} * p) >> 32);
    return u >= p ? u - p : u;
  }
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    const std::uint32_t s = a + b;
    return s >= p ? s - p : s;
  }
  std::uint32_t to_mont(std::uint32_t x) const { return mul(x % p, r2); }
  std::uint32_t from_mont(std::uint32_t x) const { return mul(x, 1); }
};

/// Reduce a rational mod p; nullopt when the denominator is divisible by p.
std::optional<std::uint32_t> reduce_rational(const Rational& q, std::uint32_t p = kPrime);

/// Polynomial compiled for batch evaluation: Montgomery coefficients and a
/// flat exponent table.
struct CompiledPoly {
  std::size_t nvars = 0;
  std::vector<std::uint32_t> coeffs;
  std::vector<std::uint16_t> exps;
  std::vector<std::uint16_t> max_exp;
};

std::optional<CompiledPoly> compile(const MultiPoly& p, const Montgomery& mg);

/// Evaluate at `count` points laid out structure-of-arrays: the value of
/// variable v at point k is soa[v * count + k], all in Montgomery form.
/// Results (Montgomery form) go to out[0..count).
using EvalKernel = void (*)(const CompiledPoly& poly, const Montgomery& mg,
                            std::span<const std::uint32_t> soa, std::size_t count,
                            std::span<std::uint32_t> out);

void eval_batch_scalar(const CompiledPoly& poly, const Montgomery& mg,
                       std::span<const std::uint32_t> soa, std::size_t count,
                       std::span<std::uint32_t> out);
#if defined(__x86_64__)
void eval_batch_avx2(const CompiledPoly& poly, const Montgomery& mg,
                     std::span<const std::uint32_t> soa, std::size_t count,
                     std::span<std::uint32_t> out);
#endif

bool cpu_has_avx2();
/// Fastest kernel the running CPU supports.
EvalKernel select_kernel();
std::string kernel_name(EvalKernel k);

/// A system "all equations vanish and, for each family, not every member
/// vanishes".
struct FieldSystem {
  std::vector<MultiPoly> equations;
  std::vector<std::vector<MultiPoly>> inequation_families;
};

struct SearchOptions {
  std::size_t random_points = 4096;
  std::size_t line_trials = 64;
  std::uint64_t seed = 7;
  /// Extra points to try first (e.g. reductions of known rational points).
  std::vector<std::vector<Rational>> hints;
};

/// Evidence-grade point search over F_p: random points, hinted points and
/// random axis-parallel lines (univariate root finding). A returned point
/// (standard representatives) satisfies the system mod p; failure to find
/// one proves nothing.
std::optional<std::vector<std::uint32_t>> search_point(const FieldSystem& system,
                                                       std::size_t nvars,
                                                       const SearchOptions& options = {});

/// Roots in F_p of a univariate polynomial given by coefficients (low to high,
/// standard representatives).
std::vector<std::uint32_t> univariate_roots(std::vector<std::uint32_t> coeffs, std::uint32_t p,
                                            std::uint64_t seed = 11);

}  // namespace hodgejet::ff
