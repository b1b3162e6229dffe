#include "hodgejet/exactalg/constructible.hpp"

#include <algorithm>
#include <functional>

namespace hodgejet {

Symbols extend_symbols(const Symbols& base, const std::vector<std::string>& extra,
                       std::vector<std::string>* actual_names) {
  std::vector<std::string> names = base ? base->names() : std::vector<std::string>{};
  for (std::string n : extra) {
    while (std::find(names.begin(), names.end(), n) != names.end()) n += "_";
    names.push_back(n);
    if (actual_names) actual_names->push_back(n);
  }
  return make_symbols(std::move(names));
}

Ideal eliminate(const Ideal& I, const std::vector<std::string>& keep, const Budget& budget) {
  const Symbols& syms = I.symbols();
  std::vector<std::string> keep_sorted;
  std::vector<std::string> elim;
  for (const auto& name : syms->names()) {
    if (std::find(keep.begin(), keep.end(), name) != keep.end()) keep_sorted.push_back(name);
    else elim.push_back(name);
  }
  for (const auto& k : keep) syms->index(k);  // validates
  Symbols keep_syms = make_symbols(keep_sorted);
  if (elim.empty()) return I.rebased(keep_syms);
  std::vector<std::string> order = elim;
  order.insert(order.end(), keep_sorted.begin(), keep_sorted.end());
  Symbols perm = make_symbols(order);
  auto basis = groebner(I.rebased(perm), MonomialOrder::elimination(elim.size()), budget);
  Ideal out(keep_syms);
  for (const auto& g : basis) {
    bool pure = true;
    for (std::size_t v = 0; v < elim.size() && pure; ++v)
      if (g.depends_on(v)) pure = false;
    if (pure) out.add(g.rebased(keep_syms));
  }
  return out;
}

namespace {

// I : h^infinity = (I + (1 - y h)) ∩ K[x].
Ideal saturate_by(const Ideal& I, const MultiPoly& h, const Budget& budget) {
  std::vector<std::string> fresh;
  Symbols ext = extend_symbols(I.symbols(), {"sat_y"}, &fresh);
  Ideal big = I.rebased(ext);
  MultiPoly y = MultiPoly::variable(ext, fresh[0]);
  big.add(MultiPoly(ext, 1) - y * h.rebased(ext));
  Ideal e = eliminate(big, I.symbols()->names(), budget);
  return e.rebased(I.symbols());
}

}  // namespace

Ideal intersect(const Ideal& I, const Ideal& J, const Budget& budget) {
  std::vector<std::string> fresh;
  Symbols ext = extend_symbols(I.symbols(), {"int_t"}, &fresh);
  MultiPoly t = MultiPoly::variable(ext, fresh[0]);
  MultiPoly one_minus_t = MultiPoly(ext, 1) - t;
  Ideal big(ext);
  for (const auto& g : I.generators()) big.add(t * g.rebased(ext));
  for (const auto& g : J.generators()) big.add(one_minus_t * g.rebased(ext));
  return eliminate(big, I.symbols()->names(), budget).rebased(I.symbols());
}

Ideal saturate(const Ideal& I, const Ideal& J, const Budget& budget) {
  if (J.is_zero_ideal()) return Ideal(I.symbols(), groebner(I, MonomialOrder::grevlex(), budget));
  std::optional<Ideal> acc;
  for (const auto& h : J.generators()) {
    Ideal s = saturate_by(I, h, budget);
    acc = acc ? intersect(*acc, s, budget) : s;
  }
  return Ideal(I.symbols(), groebner(*acc, MonomialOrder::grevlex(), budget));
}

bool ideal_contains(const Ideal& I, const MultiPoly& f, const Budget& budget) {
  if (f.is_zero()) return true;
  auto basis = groebner(I, MonomialOrder::grevlex(), budget);
  return normal_form(f.symbols() ? f : MultiPoly(I.symbols(), f.constant_term()), basis).is_zero();
}

bool ideals_equal(const Ideal& I, const Ideal& J, const Budget& budget) {
  auto a = groebner(I, MonomialOrder::grevlex(), budget);
  auto b = groebner(J.rebased(I.symbols()), MonomialOrder::grevlex(), budget);
  return serialize_basis(a) == serialize_basis(b);
}

int ideal_dimension(const Ideal& I, const Budget& budget) {
  const std::size_t n = I.symbols() ? I.symbols()->size() : 0;
  if (I.is_zero_ideal()) return static_cast<int>(n);
  auto basis = groebner(I, MonomialOrder::grevlex(), budget);
  if (is_unit_basis(basis)) return -1;
  // Largest set of variables containing the support of no leading monomial.
  std::vector<std::uint64_t> supports;
  std::vector<std::vector<bool>> big_supports;
  for (const auto& g : basis) {
    std::vector<bool> s(n, false);
    for (std::size_t v = 0; v < n; ++v) s[v] = g.leading().mono[v] > 0;
    big_supports.push_back(std::move(s));
  }
  std::vector<bool> chosen(n, false);
  int best = 0;
  std::function<void(std::size_t, int)> dfs = [&](std::size_t v, int size) {
    if (size + static_cast<int>(n - v) <= best) return;
    if (v == n) {
      best = std::max(best, size);
      return;
    }
    chosen[v] = true;
    bool ok = true;
    for (const auto& s : big_supports) {
      bool inside = true;
      for (std::size_t w = 0; w < n && inside; ++w)
        if (s[w] && !chosen[w]) inside = false;
      if (inside) {
        ok = false;
        break;
      }
    }
    if (ok) dfs(v + 1, size + 1);
    chosen[v] = false;
    dfs(v + 1, size);
  };
  dfs(0, 0);
  return best;
}

ConsistencyResult check_consistent(const Stratum& stratum, const Budget& budget) {
  ConsistencyResult out;
  const Ideal& I = stratum.equations;
  const Ideal& J = stratum.inequations;
  if (J.is_zero_ideal()) {
    GroebnerRun run = groebner_run(I, MonomialOrder::grevlex(), budget, true);
    if (run.status == GroebnerStatus::Unit) {
      out.consistent = Tri::False;
    } else if (run.status == GroebnerStatus::Complete) {
      out.consistent = Tri::True;
    } else {
      out.note = run.reason;
    }
    out.certificate = std::move(run.basis);
    return out;
  }
  if (J.has_unit_generator()) return check_consistent({I, Ideal(I.symbols())}, budget);
  bool unknown = false;
  for (const auto& h : J.generators()) {
    std::vector<std::string> fresh;
    Symbols ext = extend_symbols(I.symbols(), {"sat_y"}, &fresh);
    Ideal big = I.rebased(ext);
    big.add(MultiPoly(ext, 1) - MultiPoly::variable(ext, fresh[0]) * h.rebased(ext));
    GroebnerRun run = groebner_run(big, MonomialOrder::grevlex(), budget, true);
    if (run.status == GroebnerStatus::Complete) {
      out.consistent = Tri::True;
      out.certificate = std::move(run.basis);
      return out;
    }
    if (run.status == GroebnerStatus::BudgetExceeded) {
      unknown = true;
      out.note = run.reason;
    }
  }
  if (!unknown) {
    out.consistent = Tri::False;
    out.certificate = {MultiPoly(I.symbols(), 1)};
  }
  return out;
}

ConsistencyResult check_consistent_families(const Ideal& I, const std::vector<Ideal>& families,
                                            const Budget& budget, std::size_t max_choices) {
  ConsistencyResult out;
  std::vector<const Ideal*> live;
  std::size_t choices = 1;
  for (const auto& f : families) {
    if (f.is_zero_ideal()) {
      out.consistent = Tri::False;
      out.certificate = {MultiPoly(I.symbols(), 1)};
      out.note = "empty inequation family";
      return out;
    }
    if (f.has_unit_generator()) continue;
    live.push_back(&f);
    choices = choices > max_choices ? choices : choices * f.generators().size();
  }
  if (live.empty()) return check_consistent({I, Ideal(I.symbols())}, budget);
  if (live.size() == 1) return check_consistent({I, live[0]->rebased(I.symbols())}, budget);

  if (choices <= max_choices) {
    std::vector<std::string> names;
    for (std::size_t f = 0; f < live.size(); ++f) names.push_back("sat_y" + std::to_string(f));
    std::vector<std::string> fresh;
    Symbols ext = extend_symbols(I.symbols(), names, &fresh);
    const Ideal base = I.rebased(ext);
    std::vector<std::size_t> pick(live.size(), 0);
    bool unknown = false;
    while (true) {
      Ideal big = base;
      for (std::size_t f = 0; f < live.size(); ++f)
        big.add(MultiPoly(ext, 1) -
                MultiPoly::variable(ext, fresh[f]) * live[f]->generators()[pick[f]].rebased(ext));
      GroebnerRun run = groebner_run(big, MonomialOrder::grevlex(), budget, true);
      if (run.status == GroebnerStatus::Complete) {
        out.consistent = Tri::True;
        out.certificate = std::move(run.basis);
        return out;
      }
      if (run.status == GroebnerStatus::BudgetExceeded) {
        unknown = true;
        out.note = run.reason;
      }
      std::size_t f = 0;
      while (f < live.size() && ++pick[f] == live[f]->generators().size()) pick[f++] = 0;
      if (f == live.size()) break;
    }
    if (!unknown) {
      out.consistent = Tri::False;
      out.certificate = {MultiPoly(I.symbols(), 1)};
    }
    return out;
  }

  std::vector<std::string> names;
  for (std::size_t f = 0; f < live.size(); ++f)
    for (std::size_t i = 0; i < live[f]->generators().size(); ++i)
      names.push_back("sat_y" + std::to_string(f) + "_" + std::to_string(i));
  std::vector<std::string> fresh;
  Symbols ext = extend_symbols(I.symbols(), names, &fresh);
  Ideal big = I.rebased(ext);
  std::size_t next = 0;
  for (const Ideal* f : live) {
    MultiPoly sum(ext, 1);
    for (const auto& h : f->generators()) sum -= MultiPoly::variable(ext, fresh[next++]) * h.rebased(ext);
    big.add(sum);
  }
  GroebnerRun run = groebner_run(big, MonomialOrder::grevlex(), budget, true);
  if (run.status == GroebnerStatus::Complete) out.consistent = Tri::True;
  else if (run.status == GroebnerStatus::Unit) out.consistent = Tri::False;
  else out.note = run.reason;
  out.certificate = std::move(run.basis);
  return out;
}

Tri is_consistent(const Stratum& stratum, const Budget& budget) {
  return check_consistent(stratum, budget).consistent;
}

ConstructibleSet::ConstructibleSet(Symbols ambient, std::vector<Stratum> strata)
    : ambient_(std::move(ambient)) {
  for (auto& s : strata) add(std::move(s));
}

void ConstructibleSet::add(Stratum s) {
  if (!same_symbols(s.equations.symbols(), ambient_) ||
      !same_symbols(s.inequations.symbols(), ambient_))
    throw ShapeError("stratum over a different ambient table");
  strata_.push_back(std::move(s));
}

Tri ConstructibleSet::nonempty(const Budget& budget) const {
  bool unknown = false;
  for (const auto& s : strata_) {
    Tri t = is_consistent(s, budget);
    if (t == Tri::True) return Tri::True;
    if (t == Tri::Unknown) unknown = true;
  }
  return unknown ? Tri::Unknown : Tri::False;
}

bool ConstructibleSet::contains(std::span<const Rational> point) const {
  for (const auto& s : strata_) {
    bool eq = std::all_of(s.equations.generators().begin(), s.equations.generators().end(),
                          [&](const MultiPoly& g) { return g.evaluate(point) == 0; });
    if (!eq) continue;
    if (s.inequations.is_zero_ideal()) return true;
    bool off = std::any_of(s.inequations.generators().begin(), s.inequations.generators().end(),
                           [&](const MultiPoly& g) { return g.evaluate(point) != 0; });
    if (off) return true;
  }
  return false;
}

std::string ConstructibleSet::to_json() const {
  std::string s = "[";
  for (std::size_t i = 0; i < strata_.size(); ++i) {
    if (i) s += ",";
    s += "{\"I\":" + serialize_basis(strata_[i].equations.generators()) +
         ",\"J\":" + serialize_basis(strata_[i].inequations.generators()) + "}";
  }
  return s + "]";
}

}  // namespace hodgejet
