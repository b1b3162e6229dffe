#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hodgejet/exactalg/ideal.hpp"

namespace hodgejet {

/// I : J^infinity. Throws BudgetExceeded.
Ideal saturate(const Ideal& I, const Ideal& J, const Budget& budget = Budget::from_env());

/// I ∩ K[keep], via an elimination order. Throws BudgetExceeded.
Ideal eliminate(const Ideal& I, const std::vector<std::string>& keep,
                const Budget& budget = Budget::from_env());

Ideal intersect(const Ideal& I, const Ideal& J, const Budget& budget = Budget::from_env());

/// Krull dimension of V(I) over the algebraic closure; -1 for the unit ideal.
int ideal_dimension(const Ideal& I, const Budget& budget = Budget::from_env());

/// Membership of f in I (Gröbner reduction). Throws BudgetExceeded.
bool ideal_contains(const Ideal& I, const MultiPoly& f, const Budget& budget = Budget::from_env());

/// Same reduced basis under grevlex.
bool ideals_equal(const Ideal& I, const Ideal& J, const Budget& budget = Budget::from_env());

/// One piece V(I) \ V(J) of a constructible set. An inequation ideal with no
/// generators means "no inequation": the stratum is all of V(I).
struct Stratum {
  Ideal equations;
  Ideal inequations;
};

/// Outcome of a consistency decision, with the basis that certifies it:
/// {1} when inconsistent, a proper basis (of the Rabinowitsch-extended
/// system) when consistent.
struct ConsistencyResult {
  Tri consistent = Tri::Unknown;
  std::vector<MultiPoly> certificate;
  std::string note;
};

/// Whether V(I) \ V(J) has a point over the algebraic closure.
ConsistencyResult check_consistent(const Stratum& stratum, const Budget& budget = Budget::from_env());
Tri is_consistent(const Stratum& stratum, const Budget& budget = Budget::from_env());

/// Points of V(I) where, for every family, some member does not vanish.
/// A family without generators can never be satisfied, so the result is then
/// False. Up to `max_choices` products of one member per family are decided
/// separately; larger products use one auxiliary equation 1 - sum y_i h_i
/// per family.
ConsistencyResult check_consistent_families(const Ideal& I, const std::vector<Ideal>& families,
                                            const Budget& budget = Budget::from_env(),
                                            std::size_t max_choices = 32);

/// Finite union of strata sharing one ambient table; empty list = empty set.
class ConstructibleSet {
 public:
  ConstructibleSet() = default;
  explicit ConstructibleSet(Symbols ambient, std::vector<Stratum> strata = {});

  const Symbols& ambient() const noexcept { return ambient_; }
  const std::vector<Stratum>& strata() const noexcept { return strata_; }
  void add(Stratum s);

  /// True if some stratum is consistent, False if all are inconsistent.
  Tri nonempty(const Budget& budget = Budget::from_env()) const;
  /// Does the rational point lie in the set?
  bool contains(std::span<const Rational> point) const;

  std::string to_json() const;

 private:
  Symbols ambient_;
  std::vector<Stratum> strata_;
};

/// Symbol table extended with fresh variable names (suffixing '_' on clash).
Symbols extend_symbols(const Symbols& base, const std::vector<std::string>& extra,
                       std::vector<std::string>* actual_names = nullptr);

}  // namespace hodgejet
