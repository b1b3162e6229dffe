#include "hodgejet/exactalg/ffsample.hpp"

#include <algorithm>
#include <functional>
#include <random>

#include "hodgejet/exactalg/ideal.hpp"

namespace hodgejet::ff {

namespace {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using UPoly = std::vector<u32>;  // low to high, standard representatives

u32 mulm(u32 a, u32 b, u32 p) { return static_cast<u32>(u64{a} * b % p); }
u32 addm(u32 a, u32 b, u32 p) { return static_cast<u32>((u64{a} + b) % p); }
u32 subm(u32 a, u32 b, u32 p) { return a >= b ? a - b : static_cast<u32>(u64{a} + p - b); }

u32 powm(u32 a, u64 e, u32 p) {
  u64 r = 1, b = a % p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return static_cast<u32>(r);
}
u32 invm(u32 a, u32 p) { return powm(a, p - 2, p); }

void trim(UPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

UPoly poly_mod(UPoly a, const UPoly& m, u32 p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const u32 lead_inv = invm(m.back(), p);
  while (a.size() >= m.size()) {
    const u32 f = mulm(a.back(), lead_inv, p);
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) a[shift + i] = subm(a[shift + i], mulm(f, m[i], p), p);
    trim(a);
  }
  return a;
}

UPoly poly_mulmod(const UPoly& a, const UPoly& b, const UPoly& m, u32 p) {
  if (a.empty() || b.empty()) return {};
  UPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = addm(r[i + j], mulm(a[i], b[j], p), p);
  }
  return poly_mod(std::move(r), m, p);
}

UPoly poly_gcd(UPoly a, UPoly b, u32 p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    UPoly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const u32 inv = invm(a.back(), p);
    for (auto& c : a) c = mulm(c, inv, p);
  }
  return a;
}

// base^e mod m
UPoly poly_powmod(UPoly base, u64 e, const UPoly& m, u32 p) {
  UPoly r{1};
  r = poly_mod(r, m, p);
  base = poly_mod(std::move(base), m, p);
  while (e) {
    if (e & 1) r = poly_mulmod(r, base, m, p);
    base = poly_mulmod(base, base, m, p);
    e >>= 1;
  }
  return r;
}

UPoly poly_div(UPoly a, const UPoly& b, u32 p) {
  trim(a);
  if (a.size() < b.size()) return {};
  UPoly q(a.size() - b.size() + 1, 0);
  const u32 lead_inv = invm(b.back(), p);
  while (a.size() >= b.size()) {
    const u32 f = mulm(a.back(), lead_inv, p);
    const std::size_t shift = a.size() - b.size();
    q[shift] = f;
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = subm(a[shift + i], mulm(f, b[i], p), p);
    trim(a);
  }
  return q;
}

// Split a monic squarefree product of distinct linear factors.
void split_linear(const UPoly& g, u32 p, std::mt19937_64& rng, std::vector<u32>& roots) {
  if (g.size() <= 1) return;
  if (g.size() == 2) {
    roots.push_back(subm(0, g[0], p));
    return;
  }
  std::uniform_int_distribution<u32> dist(0, p - 1);
  for (int attempt = 0; attempt < 64; ++attempt) {
    UPoly h = poly_powmod(UPoly{dist(rng), 1}, (u64{p} - 1) / 2, g, p);
    if (h.empty()) h = {0};
    h[0] = subm(h[0], 1, p);
    UPoly d = poly_gcd(g, h, p);
    if (d.size() > 1 && d.size() < g.size()) {
      split_linear(d, p, rng, roots);
      split_linear(poly_div(g, d, p), p, rng, roots);
      return;
    }
  }
}

}  // namespace

Montgomery::Montgomery(u32 modulus) : p(modulus) {
  u32 inv = 1;
  for (int i = 0; i < 5; ++i) inv *= 2 - p * inv;  // Newton: inv = p^{-1} mod 2^32
  neg_pinv = ~inv + 1;
  const u64 r = (u64{1} << 32) % p;
  r2 = static_cast<u32>(r * r % p);
}

std::optional<u32> reduce_rational(const Rational& q, u32 p) {
  mpz_class num = q.get_num() % p;
  if (num < 0) num += p;
  mpz_class den = q.get_den() % p;
  if (den == 0) return std::nullopt;
  const u32 n = static_cast<u32>(num.get_ui());
  const u32 d = static_cast<u32>(den.get_ui());
  return mulm(n, invm(d, p), p);
}

std::optional<CompiledPoly> compile(const MultiPoly& poly, const Montgomery& mg) {
  CompiledPoly c;
  c.nvars = poly.symbols() ? poly.symbols()->size() : 0;
  c.max_exp.assign(c.nvars, 0);
  for (const auto& t : poly.terms()) {
    auto r = reduce_rational(t.coeff, mg.p);
    if (!r) return std::nullopt;
    if (*r == 0) continue;
    c.coeffs.push_back(mg.to_mont(*r));
    for (std::size_t v = 0; v < c.nvars; ++v) {
      const std::uint16_t e = v < t.mono.size() ? t.mono[v] : 0;
      c.exps.push_back(e);
      c.max_exp[v] = std::max(c.max_exp[v], e);
    }
  }
  return c;
}

void eval_batch_scalar(const CompiledPoly& poly, const Montgomery& mg, std::span<const u32> soa,
                       std::size_t count, std::span<u32> out) {
  std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(count), 0u);
  const std::size_t nterms = poly.coeffs.size();
  for (std::size_t k = 0; k < count; ++k) {
    u32 acc = 0;
    for (std::size_t t = 0; t < nterms; ++t) {
      u32 prod = poly.coeffs[t];
      for (std::size_t v = 0; v < poly.nvars; ++v) {
        const u32 x = soa[v * count + k];
        for (std::uint16_t e = poly.exps[t * poly.nvars + v]; e > 0; --e) prod = mg.mul(prod, x);
      }
      acc = mg.add(acc, prod);
    }
    out[k] = acc;
  }
}

bool cpu_has_avx2() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

EvalKernel select_kernel() {
#if defined(__x86_64__)
  if (cpu_has_avx2()) return &eval_batch_avx2;
#endif
  return &eval_batch_scalar;
}

std::string kernel_name(EvalKernel k) {
#if defined(__x86_64__)
  if (k == &eval_batch_avx2) return "avx2";
#endif
  return k == &eval_batch_scalar ? "scalar" : "unknown";
}

std::vector<u32> univariate_roots(std::vector<u32> f, u32 p, std::uint64_t seed) {
  trim(f);
  if (f.size() <= 1) return {};
  const u32 inv = invm(f.back(), p);
  for (auto& c : f) c = mulm(c, inv, p);
  // Distinct-root part: gcd(f, x^p - x).
  UPoly xp = poly_powmod(UPoly{0, 1}, p, f, p);
  if (xp.size() < 2) xp.resize(2, 0);
  xp[1] = subm(xp[1], 1, p);
  UPoly g = poly_gcd(f, xp, p);
  std::vector<u32> roots;
  std::mt19937_64 rng(seed);
  split_linear(g, p, rng, roots);
  std::sort(roots.begin(), roots.end());
  return roots;
}

namespace {

struct Compiled {
  std::vector<CompiledPoly> eqs;
  std::vector<std::vector<CompiledPoly>> families;
};

bool satisfies(const Compiled& sys, const Montgomery& mg, const std::vector<u32>& mont_point) {
  std::vector<u32> out(1);
  for (const auto& e : sys.eqs) {
    eval_batch_scalar(e, mg, mont_point, 1, out);
    if (out[0] != 0) return false;
  }
  for (const auto& fam : sys.families) {
    bool some = false;
    for (const auto& h : fam) {
      eval_batch_scalar(h, mg, mont_point, 1, out);
      if (out[0] != 0) {
        some = true;
        break;
      }
    }
    if (!some) return false;
  }
  return true;
}

// Coefficients (low to high, standard form) of poly restricted to the line
// where variable `var` is free and the others take `point` (standard form).
UPoly restrict_to_axis(const CompiledPoly& c, const Montgomery& mg, const std::vector<u32>& point,
                       std::size_t var) {
  UPoly out(static_cast<std::size_t>(c.nvars ? c.max_exp[var] : 0) + 1, 0);
  for (std::size_t t = 0; t < c.coeffs.size(); ++t) {
    u32 coeff = mg.from_mont(c.coeffs[t]);
    for (std::size_t v = 0; v < c.nvars; ++v) {
      if (v == var) continue;
      coeff = mulm(coeff, powm(point[v], c.exps[t * c.nvars + v], mg.p), mg.p);
    }
    const std::size_t e = c.exps[t * c.nvars + var];
    out[e] = addm(out[e], coeff, mg.p);
  }
  return out;
}

}  // namespace

std::optional<std::vector<u32>> search_point(const FieldSystem& system, std::size_t nvars,
                                             const SearchOptions& options) {
  const Montgomery mg;
  // Constants and polynomials over a shorter table get padded exponent rows.
  auto compile_padded = [&](const MultiPoly& f) -> std::optional<CompiledPoly> {
    auto c = compile(f, mg);
    if (!c || c->nvars == nvars) return c;
    const std::size_t old = c->nvars;
    std::vector<std::uint16_t> ex(c->coeffs.size() * nvars, 0);
    for (std::size_t t = 0; t < c->coeffs.size(); ++t)
      for (std::size_t v = 0; v < std::min(old, nvars); ++v) ex[t * nvars + v] = c->exps[t * old + v];
    c->exps = std::move(ex);
    c->nvars = nvars;
    c->max_exp.resize(nvars, 0);
    return c;
  };
  Compiled sys;
  for (const auto& e : system.equations) {
    auto c = compile_padded(e);
    if (!c) return std::nullopt;
    sys.eqs.push_back(std::move(*c));
  }
  for (const auto& fam : system.inequation_families) {
    std::vector<CompiledPoly> cf;
    for (const auto& h : fam) {
      auto c = compile_padded(h);
      if (!c) return std::nullopt;
      cf.push_back(std::move(*c));
    }
    sys.families.push_back(std::move(cf));
  }

  auto to_mont = [&](const std::vector<u32>& pt) {
    std::vector<u32> m(pt.size());
    for (std::size_t i = 0; i < pt.size(); ++i) m[i] = mg.to_mont(pt[i]);
    return m;
  };

  for (const auto& hint : options.hints) {
    if (hint.size() != nvars) continue;
    std::vector<u32> pt(nvars);
    bool ok = true;
    for (std::size_t i = 0; i < nvars && ok; ++i) {
      auto r = reduce_rational(hint[i], mg.p);
      if (!r) ok = false;
      else pt[i] = *r;
    }
    if (ok && satisfies(sys, mg, to_mont(pt))) return pt;
  }

  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<u32> dist(0, mg.p - 1);

  // Random points in batches: only useful when there are no equations, or
  // they are satisfied identically, so run the batch through the kernel and
  // test survivors exactly.
  const EvalKernel kernel = select_kernel();
  const std::size_t batch = 256;
  std::vector<u32> soa(nvars * batch), out(batch);
  for (std::size_t done = 0; done < options.random_points; done += batch) {
    for (auto& x : soa) x = mg.to_mont(dist(rng));
    std::vector<bool> alive(batch, true);
    for (const auto& e : sys.eqs) {
      kernel(e, mg, soa, batch, out);
      for (std::size_t k = 0; k < batch; ++k)
        if (out[k] != 0) alive[k] = false;
    }
    for (std::size_t k = 0; k < batch; ++k) {
      if (!alive[k]) continue;
      std::vector<u32> mp(nvars);
      for (std::size_t v = 0; v < nvars; ++v) mp[v] = soa[v * batch + k];
      if (satisfies(sys, mg, mp)) {
        std::vector<u32> pt(nvars);
        for (std::size_t v = 0; v < nvars; ++v) pt[v] = mg.from_mont(mp[v]);
        return pt;
      }
    }
  }

  // Specialize all but k coordinates to small integers, triangularize the
  // rest with an exact lex basis, and back-substitute mod p.
  if (!system.equations.empty() && nvars > 1) {
    std::vector<MultiPoly> eqs;
    Symbols table;
    for (const auto& e : system.equations)
      if (e.symbols() && e.symbols()->size() == nvars) table = e.symbols();
    if (table) {
      for (const auto& e : system.equations) eqs.push_back(e.rebased(table));
      Budget small;
      small.max_degree = 24;
      small.max_basis = 200;
      small.max_pairs = 4000;
      small.time = std::chrono::milliseconds(200);
      const std::size_t k = std::min(nvars, system.equations.size());
      for (std::size_t trial = 0; trial < options.line_trials / 4 + 1; ++trial) {
        std::vector<std::size_t> order(nvars);
        for (std::size_t i = 0; i < nvars; ++i) order[i] = i;
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<bool> kept(nvars, false);
        for (std::size_t i = 0; i < k; ++i) kept[order[i]] = true;
        std::vector<MultiPoly> images;
        std::vector<u32> pt(nvars, 0);
        for (std::size_t v = 0; v < nvars; ++v) {
          if (kept[v]) {
            images.push_back(MultiPoly::variable(table, v));
          } else {
            const long val = static_cast<long>(dist(rng) % 7) - 2;
            images.push_back(MultiPoly(table, Rational(val)));
            pt[v] = static_cast<u32>((val % static_cast<long>(mg.p) + mg.p) % mg.p);
          }
        }
        std::vector<MultiPoly> spec;
        for (const auto& e : eqs) spec.push_back(e.substitute(images, table));
        GroebnerRun run = groebner_run(Ideal(table, spec), MonomialOrder::lex(), small, true);
        if (run.status != GroebnerStatus::Complete) continue;
        std::vector<CompiledPoly> basis;
        bool ok = true;
        for (const auto& b : run.basis) {
          auto c = compile_padded(b);
          if (!c) ok = false;
          else basis.push_back(std::move(*c));
        }
        if (!ok) continue;
        std::vector<std::size_t> free_vars;
        for (std::size_t v = nvars; v-- > 0;)
          if (kept[v]) free_vars.push_back(v);
        std::vector<bool> assigned(nvars, false);
        for (std::size_t v = 0; v < nvars; ++v) assigned[v] = !kept[v];
        std::optional<std::vector<u32>> found;
        std::function<void(std::size_t)> dfs = [&](std::size_t level) {
          if (found) return;
          if (level == free_vars.size()) {
            if (satisfies(sys, mg, to_mont(pt))) found = pt;
            return;
          }
          const std::size_t v = free_vars[level];
          UPoly g;
          bool constrained = false;
          for (std::size_t b = 0; b < basis.size(); ++b) {
            const CompiledPoly& c = basis[b];
            bool usable = c.max_exp[v] > 0;
            for (std::size_t w = 0; w < nvars && usable; ++w)
              if (w != v && c.max_exp[w] > 0 && !assigned[w]) usable = false;
            if (!usable) continue;
            UPoly r = restrict_to_axis(c, mg, pt, v);
            trim(r);
            constrained = true;
            if (r.empty()) continue;
            g = g.empty() ? r : poly_gcd(g, r, mg.p);
          }
          std::vector<u32> candidates;
          if (!constrained || (g.empty()))
            candidates = {dist(rng), 0, 1};
          else if (g.size() > 1)
            candidates = univariate_roots(g, mg.p, options.seed + trial + level);
          if (candidates.size() > 4) candidates.resize(4);
          assigned[v] = true;
          for (u32 c : candidates) {
            pt[v] = c;
            dfs(level + 1);
            if (found) break;
          }
          assigned[v] = false;
        };
        dfs(0);
        if (found) return found;
      }
    }
  }

  // Axis-parallel lines: fix all but one coordinate (sometimes to zero, which
  // finds points on coordinate subspaces), then solve the gcd of the
  // restricted equations.
  if (nvars == 0) return std::nullopt;
  for (std::size_t trial = 0; trial < options.line_trials; ++trial) {
    std::vector<u32> pt(nvars);
    for (auto& x : pt) {
      const u32 pick = dist(rng) % 4;
      x = pick == 0 ? 0 : (pick == 1 ? 1 : dist(rng));
    }
    const std::size_t var = dist(rng) % nvars;
    UPoly g;
    bool identically_zero = true;
    for (const auto& e : sys.eqs) {
      UPoly r = restrict_to_axis(e, mg, pt, var);
      trim(r);
      if (r.empty()) continue;
      identically_zero = false;
      g = g.empty() ? r : poly_gcd(g, r, mg.p);
      if (g.size() == 1) break;
    }
    std::vector<u32> candidates;
    if (identically_zero) {
      candidates = {0, 1, dist(rng)};
    } else if (g.size() > 1) {
      candidates = univariate_roots(g, mg.p, options.seed + trial);
    }
    for (u32 c : candidates) {
      pt[var] = c;
      if (satisfies(sys, mg, to_mont(pt))) return pt;
    }
  }
  return std::nullopt;
}

}  // namespace hodgejet::ff
