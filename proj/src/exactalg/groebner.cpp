#include <algorithm>
#include <cstdlib>
#include <numeric>

#include "hodgejet/exactalg/ideal.hpp"

namespace hodgejet {

Ideal::Ideal(Symbols symbols, std::vector<MultiPoly> generators) : symbols_(std::move(symbols)) {
  for (auto& g : generators) add(std::move(g));
}

Ideal Ideal::unit(Symbols symbols) {
  Ideal I(symbols);
  I.add(MultiPoly(symbols, 1));
  return I;
}

bool Ideal::has_unit_generator() const {
  return std::any_of(gens_.begin(), gens_.end(),
                     [](const MultiPoly& g) { return g.is_constant() && !g.is_zero(); });
}

void Ideal::add(MultiPoly p) {
  if (p.is_zero()) return;
  if (!p.symbols()) p = MultiPoly(symbols_, p.constant_term());
  if (!same_symbols(p.symbols(), symbols_)) throw ShapeError("generator over a foreign symbol table");
  gens_.push_back(std::move(p));
}

Ideal Ideal::operator+(const Ideal& other) const {
  Ideal r = *this;
  for (const auto& g : other.gens_) r.add(g);
  return r;
}

Ideal Ideal::rebased(const Symbols& target) const {
  Ideal r(target);
  for (const auto& g : gens_) r.add(g.rebased(target));
  return r;
}

std::string MonomialOrder::name() const {
  switch (kind) {
    case Kind::Grevlex: return "grevlex";
    case Kind::Lex: return "lex";
    case Kind::Block: return "block(" + std::to_string(block) + ")";
  }
  return "?";
}

Budget Budget::from_env() {
  Budget b;
  if (const char* ms = std::getenv("HODGEJET_BUDGET_MS")) {
    char* end = nullptr;
    const long long v = std::strtoll(ms, &end, 10);
    if (end != ms && v > 0) b.time = std::chrono::milliseconds(v);
  }
  return b;
}

Budget Budget::tiny() {
  Budget b;
  b.max_degree = 3;
  b.max_basis = 4;
  b.max_pairs = 3;
  b.time = std::chrono::milliseconds(5);
  return b;
}

std::string to_string(Tri t) {
  switch (t) {
    case Tri::False: return "false";
    case Tri::True: return "true";
    case Tri::Unknown: return "unknown";
  }
  return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

struct Order {
  std::size_t n;
  MonomialOrder order;

  static int grevlex(const Exponent* a, const Exponent* b, std::size_t lo, std::size_t hi) {
    int da = 0, db = 0;
    for (std::size_t i = lo; i < hi; ++i) {
      da += a[i];
      db += b[i];
    }
    if (da != db) return da < db ? -1 : 1;
    for (std::size_t i = hi; i-- > lo;) {
      if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
    }
    return 0;
  }

  int operator()(const Exponent* a, const Exponent* b) const {
    switch (order.kind) {
      case MonomialOrder::Kind::Grevlex: return grevlex(a, b, 0, n);
      case MonomialOrder::Kind::Lex:
        for (std::size_t i = 0; i < n; ++i)
          if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
        return 0;
      case MonomialOrder::Kind::Block: {
        const std::size_t k = std::min(order.block, n);
        if (int c = grevlex(a, b, 0, k)) return c;
        return grevlex(a, b, k, n);
      }
    }
    return 0;
  }
};

struct GPoly {
  std::vector<Exponent> e;
  std::vector<Integer> c;
  int sugar = 0;

  std::size_t len() const { return c.size(); }
  const Exponent* mono(std::size_t i, std::size_t n) const { return e.data() + i * n; }
};

int degree(const Exponent* m, std::size_t n) {
  int d = 0;
  for (std::size_t i = 0; i < n; ++i) d += m[i];
  return d;
}

std::uint64_t divmask(const Exponent* m, std::size_t n) {
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (m[i]) mask |= std::uint64_t{1} << (i % 64);
  return mask;
}

bool divides(const Exponent* a, const Exponent* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    if (a[i] > b[i]) return false;
  return true;
}

bool coprime(const Exponent* a, const Exponent* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    if (a[i] && b[i]) return false;
  return true;
}

void normalize_content(GPoly& p) {
  if (p.c.empty()) return;
  Integer g = 0;
  for (const auto& x : p.c) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g == 1) break;
  }
  if (p.c.front() < 0) g = -g;
  if (g != 1)
    for (auto& x : p.c) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
}

class Engine {
 public:
  Engine(std::size_t n, MonomialOrder order, const Budget& budget)
      : n_(n), cmp_{n, order}, budget_(budget), start_(Clock::now()) {}

  GPoly from_multipoly(const MultiPoly& p) const {
    GPoly g;
    std::vector<std::pair<const Term*, std::size_t>> idx;
    for (const auto& t : p.terms()) idx.push_back({&t, 0});
    std::sort(idx.begin(), idx.end(), [&](const auto& x, const auto& y) {
      return cmp_(x.first->mono.data(), y.first->mono.data()) > 0;
    });
    Integer den = 1;
    for (const auto& t : p.terms()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.coeff.get_den_mpz_t());
    for (const auto& [t, _] : idx) {
      g.e.insert(g.e.end(), t->mono.begin(), t->mono.end());
      Integer v = t->coeff.get_num() * (den / t->coeff.get_den());
      g.c.push_back(std::move(v));
    }
    normalize_content(g);
    g.sugar = p.total_degree();
    return g;
  }

  MultiPoly to_multipoly(const GPoly& g, const Symbols& symbols, bool make_monic) const {
    std::vector<Term> terms;
    terms.reserve(g.len());
    const Rational lc = make_monic && g.len() ? Rational(g.c.front()) : Rational(1);
    for (std::size_t i = 0; i < g.len(); ++i) {
      Monomial m(g.mono(i, n_), g.mono(i, n_) + n_);
      Rational q(g.c[i]);
      q /= lc;
      terms.push_back({std::move(m), std::move(q)});
    }
    return MultiPoly::from_terms(symbols, std::move(terms));
  }

  // a*p - b*x^shift*q, both sorted decreasing, starting at p[from].
  GPoly combine(const GPoly& p, std::size_t from, const Integer& a, const GPoly& q,
                const Exponent* shift, const Integer& b) const {
    GPoly r;
    r.e.reserve((p.len() - from + q.len()) * n_);
    r.c.reserve(p.len() - from + q.len());
    std::vector<Exponent> sm(n_);
    auto shifted = [&](std::size_t j) {
      const Exponent* m = q.mono(j, n_);
      for (std::size_t v = 0; v < n_; ++v) sm[v] = m[v] + shift[v];
      return sm.data();
    };
    std::size_t i = from, j = 0;
    const bool a_one = a == 1;
    const Exponent* qm = q.len() ? shifted(0) : nullptr;
    while (i < p.len() || j < q.len()) {
      int c;
      if (i >= p.len()) c = -1;
      else if (j >= q.len()) c = 1;
      else c = cmp_(p.mono(i, n_), qm);
      if (c > 0) {
        r.e.insert(r.e.end(), p.mono(i, n_), p.mono(i, n_) + n_);
        r.c.push_back(a_one ? p.c[i] : Integer(a * p.c[i]));
        ++i;
      } else if (c < 0) {
        r.e.insert(r.e.end(), qm, qm + n_);
        r.c.push_back(-b * q.c[j]);
        ++j;
        if (j < q.len()) qm = shifted(j);
      } else {
        Integer v = a_one ? Integer(p.c[i]) : Integer(a * p.c[i]);
        v -= b * q.c[j];
        if (v != 0) {
          r.e.insert(r.e.end(), qm, qm + n_);
          r.c.push_back(std::move(v));
        }
        ++i;
        ++j;
        if (j < q.len()) qm = shifted(j);
      }
    }
    return r;
  }

  // Index of the shortest reducer whose leading monomial divides m.
  std::optional<std::size_t> find_reducer(const Exponent* m, std::size_t skip = SIZE_MAX) const {
    const std::uint64_t mask = divmask(m, n_);
    std::optional<std::size_t> best;
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      if (k == skip || !reducer_[k]) continue;
      if ((lead_mask_[k] & ~mask) != 0) continue;
      if (!divides(basis_[k].mono(0, n_), m, n_)) continue;
      if (!best || basis_[k].len() < basis_[*best].len()) best = k;
    }
    return best;
  }

  // Full reduction; `scale` accumulates the integer multiplier applied to p.
  GPoly reduce(GPoly p, std::size_t skip = SIZE_MAX, Integer* scale = nullptr, bool content = true) {
    GPoly out;
    out.sugar = p.sugar;
    std::size_t head = 0;
    std::vector<Exponent> shift(n_);
    std::size_t steps = 0;
    while (head < p.len()) {
      const Exponent* m = p.mono(head, n_);
      auto k = find_reducer(m, skip);
      if (!k) {
        out.e.insert(out.e.end(), m, m + n_);
        out.c.push_back(p.c[head]);
        ++head;
        continue;
      }
      const GPoly& g = basis_[*k];
      const Exponent* gm = g.mono(0, n_);
      for (std::size_t v = 0; v < n_; ++v) shift[v] = m[v] - gm[v];
      Integer gcd;
      mpz_gcd(gcd.get_mpz_t(), p.c[head].get_mpz_t(), g.c[0].get_mpz_t());
      Integer a = g.c[0] / gcd, b = p.c[head] / gcd;
      if (a < 0) {
        a = -a;
        b = -b;
      }
      p = combine(p, head, a, g, shift.data(), b);
      p.sugar = std::max(out.sugar, g.sugar + degree(shift.data(), n_));
      out.sugar = p.sugar;
      head = 0;
      if (a != 1) {
        for (auto& x : out.c) x *= a;
        if (scale) *scale *= a;
      }
      if (content && (++steps % 16 == 0)) {
        // Keep coefficient growth in check across both halves.
        GPoly both = out;
        both.e.insert(both.e.end(), p.e.begin(), p.e.end());
        both.c.insert(both.c.end(), p.c.begin(), p.c.end());
        Integer g2 = 0;
        for (const auto& x : both.c) mpz_gcd(g2.get_mpz_t(), g2.get_mpz_t(), x.get_mpz_t());
        if (g2 > 1) {
          for (auto& x : out.c) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g2.get_mpz_t());
          for (auto& x : p.c) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g2.get_mpz_t());
        }
      }
      check_time();
    }
    if (content) normalize_content(out);
    return out;
  }

  void check_time() {
    if (++ticks_ % 64 == 0 && Clock::now() - start_ > budget_.time) throw Timeout{};
  }

  struct Timeout {};

  struct Pair {
    std::size_t i, j;
    std::vector<Exponent> lcm;
    int sugar;
  };

  std::vector<Exponent> lcm_of(std::size_t i, std::size_t j) const {
    std::vector<Exponent> l(n_);
    const Exponent* a = basis_[i].mono(0, n_);
    const Exponent* b = basis_[j].mono(0, n_);
    for (std::size_t v = 0; v < n_; ++v) l[v] = std::max(a[v], b[v]);
    return l;
  }

  Pair make_pair(std::size_t i, std::size_t j) const {
    Pair p{i, j, lcm_of(i, j), 0};
    const int dl = degree(p.lcm.data(), n_);
    const int si = basis_[i].sugar + dl - degree(basis_[i].mono(0, n_), n_);
    const int sj = basis_[j].sugar + dl - degree(basis_[j].mono(0, n_), n_);
    p.sugar = std::max(si, sj);
    return p;
  }

  // Pairs are kept sorted so the preferred pair sits at the back.
  bool pair_after(const Pair& x, const Pair& y) const {
    if (x.sugar != y.sugar) return x.sugar > y.sugar;
    if (int c = cmp_(x.lcm.data(), y.lcm.data())) return c > 0;
    if (x.j != y.j) return x.j > y.j;
    return x.i > y.i;
  }

  void insert(GPoly h) {
    const std::size_t hi = basis_.size();
    lead_mask_.push_back(divmask(h.mono(0, n_), n_));
    basis_.push_back(std::move(h));
    reducer_.push_back(true);
    active_.push_back(false);
    const Exponent* hm = basis_[hi].mono(0, n_);

    std::vector<Pair> C;
    for (std::size_t g = 0; g < hi; ++g)
      if (active_[g]) C.push_back(make_pair(g, hi));
    std::vector<Pair> D;
    for (std::size_t a = 0; a < C.size(); ++a) {
      const Pair& p = C[a];
      const bool cp = coprime(hm, basis_[p.i].mono(0, n_), n_);
      bool keep = cp;
      if (!keep) {
        keep = true;
        for (std::size_t b = a + 1; b < C.size() && keep; ++b)
          if (divides(C[b].lcm.data(), p.lcm.data(), n_)) keep = false;
        for (std::size_t b = 0; b < D.size() && keep; ++b)
          if (divides(D[b].lcm.data(), p.lcm.data(), n_)) keep = false;
      }
      if (keep) D.push_back(p);
    }
    std::vector<Pair> kept;
    for (auto& p : pairs_) {
      if (divides(hm, p.lcm.data(), n_)) {
        auto l1 = lcm_of(p.i, hi), l2 = lcm_of(p.j, hi);
        if (l1 != p.lcm && l2 != p.lcm) continue;
      }
      kept.push_back(std::move(p));
    }
    for (auto& p : D)
      if (!coprime(hm, basis_[p.i].mono(0, n_), n_)) kept.push_back(std::move(p));
    pairs_ = std::move(kept);
    std::sort(pairs_.begin(), pairs_.end(), [&](const Pair& x, const Pair& y) { return pair_after(x, y); });

    for (std::size_t g = 0; g < hi; ++g)
      if (active_[g] && divides(hm, basis_[g].mono(0, n_), n_)) active_[g] = false;
    active_[hi] = true;
    stats_.basis_peak = std::max(stats_.basis_peak, basis_.size());
  }

  GPoly spoly(const Pair& p) const {
    const GPoly& f = basis_[p.i];
    const GPoly& g = basis_[p.j];
    std::vector<Exponent> sf(n_), sg(n_);
    for (std::size_t v = 0; v < n_; ++v) {
      sf[v] = p.lcm[v] - f.mono(0, n_)[v];
      sg[v] = p.lcm[v] - g.mono(0, n_)[v];
    }
    Integer gcd;
    mpz_gcd(gcd.get_mpz_t(), f.c[0].get_mpz_t(), g.c[0].get_mpz_t());
    const Integer a = g.c[0] / gcd, b = f.c[0] / gcd;
    // a * x^sf * f - b * x^sg * g
    GPoly fs;
    fs.e.reserve(f.e.size());
    for (std::size_t i = 0; i < f.len(); ++i)
      for (std::size_t v = 0; v < n_; ++v) fs.e.push_back(f.mono(i, n_)[v] + sf[v]);
    fs.c = f.c;
    GPoly s = combine(fs, 0, a, g, sg.data(), b);
    s.sugar = p.sugar;
    return s;
  }

  static bool is_constant(const GPoly& p, std::size_t n) {
    return p.len() > 0 && degree(p.mono(0, n), n) == 0;
  }

  GroebnerStatus run(std::vector<GPoly> input, bool stop_on_unit, std::string& reason) {
    try {
      std::sort(input.begin(), input.end(), [&](const GPoly& a, const GPoly& b) {
        return cmp_(a.mono(0, n_), b.mono(0, n_)) < 0;
      });
      for (auto& f : input) {
        GPoly r = reduce(std::move(f));
        if (r.len() == 0) continue;
        if (is_constant(r, n_)) return unit();
        insert(std::move(r));
      }
      while (!pairs_.empty()) {
        if (stats_.pairs_reduced >= budget_.max_pairs) {
          reason = "pair cap " + std::to_string(budget_.max_pairs);
          return GroebnerStatus::BudgetExceeded;
        }
        Pair p = std::move(pairs_.back());
        pairs_.pop_back();
        if (degree(p.lcm.data(), n_) > budget_.max_degree) {
          reason = "degree cap " + std::to_string(budget_.max_degree);
          return GroebnerStatus::BudgetExceeded;
        }
        ++stats_.pairs_reduced;
        GPoly s = reduce(spoly(p));
        if (s.len() == 0) {
          ++stats_.zero_reductions;
          continue;
        }
        if (is_constant(s, n_)) {
          if (stop_on_unit) return unit();
          insert_unit_and_finish();
          return GroebnerStatus::Unit;
        }
        insert(std::move(s));
        if (basis_.size() > budget_.max_basis) {
          reason = "basis cap " + std::to_string(budget_.max_basis);
          return GroebnerStatus::BudgetExceeded;
        }
        if (Clock::now() - start_ > budget_.time) throw Timeout{};
      }
      return GroebnerStatus::Complete;
    } catch (const Timeout&) {
      reason = "time cap " + std::to_string(budget_.time.count()) + " ms";
      return GroebnerStatus::BudgetExceeded;
    }
  }

  GroebnerStatus unit() {
    insert_unit_and_finish();
    return GroebnerStatus::Unit;
  }

  void insert_unit_and_finish() {
    basis_.clear();
    GPoly one;
    one.e.assign(n_, 0);
    one.c.push_back(1);
    basis_.push_back(std::move(one));
    lead_mask_.assign(1, 0);
    reducer_.assign(1, true);
    active_.assign(1, true);
    pairs_.clear();
  }

  // Minimal, interreduced basis over the active elements.
  std::vector<GPoly> reduced_basis() {
    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < basis_.size(); ++k)
      if (active_[k]) keep.push_back(k);
    // Restrict reducers to the minimal set.
    std::fill(reducer_.begin(), reducer_.end(), false);
    for (auto k : keep) reducer_[k] = true;
    std::vector<GPoly> out;
    for (auto k : keep) {
      GPoly r = reduce(basis_[k], k);
      out.push_back(std::move(r));
    }
    std::sort(out.begin(), out.end(), [&](const GPoly& a, const GPoly& b) {
      return cmp_(a.mono(0, n_), b.mono(0, n_)) > 0;
    });
    return out;
  }

  std::vector<GPoly> partial() const {
    std::vector<GPoly> out;
    for (std::size_t k = 0; k < basis_.size(); ++k)
      if (active_[k]) out.push_back(basis_[k]);
    return out;
  }

  void set_basis_for_reduction(std::vector<GPoly> basis) {
    basis_ = std::move(basis);
    lead_mask_.clear();
    for (const auto& b : basis_) lead_mask_.push_back(divmask(b.mono(0, n_), n_));
    reducer_.assign(basis_.size(), true);
    active_.assign(basis_.size(), true);
  }

  const GroebnerStats& stats() const { return stats_; }
  std::size_t n() const { return n_; }

 private:
  std::size_t n_;
  Order cmp_;
  Budget budget_;
  Clock::time_point start_;
  std::size_t ticks_ = 0;
  std::vector<GPoly> basis_;
  std::vector<std::uint64_t> lead_mask_;
  std::vector<bool> reducer_;
  std::vector<bool> active_;
  std::vector<Pair> pairs_;
  GroebnerStats stats_;
};

}  // namespace

GroebnerRun groebner_run(const Ideal& ideal, MonomialOrder order, const Budget& budget,
                         bool stop_on_unit) {
  GroebnerRun run;
  const Symbols& syms = ideal.symbols();
  const std::size_t n = syms ? syms->size() : 0;
  if (ideal.has_unit_generator()) {
    run.status = GroebnerStatus::Unit;
    run.basis = {MultiPoly(syms, 1)};
    return run;
  }
  if (ideal.is_zero_ideal()) return run;
  Engine engine(n, order, budget);
  std::vector<GPoly> input;
  for (const auto& g : ideal.generators()) input.push_back(engine.from_multipoly(g));
  run.status = engine.run(std::move(input), stop_on_unit, run.reason);
  run.stats = engine.stats();
  if (run.status == GroebnerStatus::Unit) {
    run.basis = {MultiPoly(syms, 1)};
    return run;
  }
  std::vector<GPoly> polys;
  if (run.status == GroebnerStatus::Complete) {
    polys = engine.reduced_basis();
  } else {
    polys = engine.partial();
  }
  for (const auto& p : polys) run.basis.push_back(engine.to_multipoly(p, syms, true));
  return run;
}

std::vector<MultiPoly> groebner(const Ideal& ideal, MonomialOrder order, const Budget& budget) {
  GroebnerRun run = groebner_run(ideal, order, budget, false);
  if (run.status == GroebnerStatus::BudgetExceeded)
    throw BudgetExceeded(run.reason, std::move(run.basis));
  return std::move(run.basis);
}

MultiPoly normal_form(const MultiPoly& f, const std::vector<MultiPoly>& basis, MonomialOrder order) {
  const Symbols syms = f.symbols() ? f.symbols() : (basis.empty() ? nullptr : basis.front().symbols());
  if (f.is_zero() || basis.empty()) return f;
  const std::size_t n = syms ? syms->size() : 0;
  Budget unlimited;
  unlimited.time = std::chrono::hours(24 * 365);
  Engine engine(n, order, unlimited);
  std::vector<GPoly> gb;
  for (const auto& b : basis) {
    MultiPoly bb = b.symbols() ? b : MultiPoly(syms, b.constant_term());
    if (!bb.is_zero()) gb.push_back(engine.from_multipoly(bb));
  }
  engine.set_basis_for_reduction(std::move(gb));
  MultiPoly ff = f.symbols() ? f : MultiPoly(syms, f.constant_term());
  // Track the rational scaling so the remainder is the true normal form.
  Integer den = 1;
  for (const auto& t : ff.terms()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.coeff.get_den_mpz_t());
  GPoly g;
  {
    std::vector<const Term*> idx;
    for (const auto& t : ff.terms()) idx.push_back(&t);
    Order cmp{n, order};
    std::sort(idx.begin(), idx.end(),
              [&](const Term* a, const Term* b) { return cmp(a->mono.data(), b->mono.data()) > 0; });
    for (const Term* t : idx) {
      g.e.insert(g.e.end(), t->mono.begin(), t->mono.end());
      g.c.push_back(t->coeff.get_num() * (den / t->coeff.get_den()));
    }
  }
  Integer scale = 1;
  GPoly r = engine.reduce(std::move(g), SIZE_MAX, &scale, false);
  MultiPoly out = engine.to_multipoly(r, syms, false);
  out *= Rational(1) / Rational(scale * den);
  return out;
}

std::string serialize_basis(const std::vector<MultiPoly>& basis) {
  std::string s = "[";
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (i) s += ",";
    s += "\"" + basis[i].to_string() + "\"";
  }
  return s + "]";
}

bool is_unit_basis(const std::vector<MultiPoly>& basis) {
  return std::any_of(basis.begin(), basis.end(),
                     [](const MultiPoly& p) { return p.is_constant() && !p.is_zero(); });
}

}  // namespace hodgejet
