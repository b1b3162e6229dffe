#pragma once

#include <chrono>
#include <cstddef>
#include <string>
#include <vector>

#include "hodgejet/errors.hpp"
#include "hodgejet/exactalg/poly.hpp"

namespace hodgejet {

/// Finitely generated ideal over a fixed symbol table. Zero generators are
/// dropped on construction, so the zero ideal has no generators.
class Ideal {
 public:
  Ideal() = default;
  explicit Ideal(Symbols symbols, std::vector<MultiPoly> generators = {});

  static Ideal unit(Symbols symbols);

  const Symbols& symbols() const noexcept { return symbols_; }
  const std::vector<MultiPoly>& generators() const noexcept { return gens_; }
  bool is_zero_ideal() const noexcept { return gens_.empty(); }
  /// True when some generator is a nonzero constant (cheap syntactic check).
  bool has_unit_generator() const;

  void add(MultiPoly p);
  Ideal operator+(const Ideal& other) const;
  Ideal rebased(const Symbols& target) const;

 private:
  Symbols symbols_;
  std::vector<MultiPoly> gens_;
};

struct MonomialOrder {
  enum class Kind { Grevlex, Lex, Block };
  Kind kind = Kind::Grevlex;
  /// For Block: the first `block` variables form the eliminated block,
  /// compared by grevlex before the remaining variables are.
  std::size_t block = 0;

  static MonomialOrder grevlex() { return {}; }
  static MonomialOrder lex() { return {Kind::Lex, 0}; }
  static MonomialOrder elimination(std::size_t first_block) { return {Kind::Block, first_block}; }
  std::string name() const;
};

/// Resource caps for Gröbner-based operations. Reaching any cap makes the
/// caller report "unknown" rather than a wrong answer.
struct Budget {
  int max_degree = 40;
  std::size_t max_basis = 4000;
  std::size_t max_pairs = 400000;
  std::chrono::milliseconds time{60000};

  /// Default budget, with the wall-clock cap taken from HODGEJET_BUDGET_MS
  /// when that variable is set.
  static Budget from_env();
  static Budget tiny();
};

class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& reason, std::vector<MultiPoly> partial)
      : Error("budget exceeded: " + reason), partial_(std::move(partial)) {}
  const std::vector<MultiPoly>& partial_basis() const noexcept { return partial_; }

 private:
  std::vector<MultiPoly> partial_;
};

/// Tri-state used wherever a budget can stop a decision procedure.
enum class Tri { False, True, Unknown };
std::string to_string(Tri t);

struct GroebnerStats {
  std::size_t pairs_reduced = 0;
  std::size_t zero_reductions = 0;
  std::size_t basis_peak = 0;
};

enum class GroebnerStatus { Complete, Unit, BudgetExceeded };

struct GroebnerRun {
  GroebnerStatus status = GroebnerStatus::Complete;
  /// Reduced basis (Complete), {1} (Unit) or the partial basis.
  std::vector<MultiPoly> basis;
  std::string reason;
  GroebnerStats stats;
};

/// Buchberger's algorithm with the Gebauer–Möller criteria and the sugar
/// selection strategy. With `stop_on_unit`, returns as soon as a nonzero
/// constant enters the basis. Never throws on budget exhaustion.
GroebnerRun groebner_run(const Ideal& ideal, MonomialOrder order, const Budget& budget,
                         bool stop_on_unit = false);

/// Reduced Gröbner basis, monic, sorted by decreasing leading monomial.
/// Throws BudgetExceeded carrying the partial basis.
std::vector<MultiPoly> groebner(const Ideal& ideal, MonomialOrder order = MonomialOrder::grevlex(),
                                const Budget& budget = Budget::from_env());

/// Remainder of `f` modulo a Gröbner basis for `order`.
MultiPoly normal_form(const MultiPoly& f, const std::vector<MultiPoly>& basis,
                      MonomialOrder order = MonomialOrder::grevlex());

/// Canonical JSON-array text of a basis, used for hashing and reports.
std::string serialize_basis(const std::vector<MultiPoly>& basis);

bool is_unit_basis(const std::vector<MultiPoly>& basis);

}  // namespace hodgejet
