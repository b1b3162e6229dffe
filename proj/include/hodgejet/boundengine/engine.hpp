#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hodgejet/boundengine/locus.hpp"

namespace hodgejet {

/// User-declared subvariety Z of S with its monodromy data.
struct CandidateSubvariety {
  std::string name;
  Ideal ideal;  // in the chart of S
  std::string type;  // catalog type name, or empty when Lie data is given
  std::vector<QMatrix> lie_generators;
  std::optional<int> dim_phi;
  /// Optional rational parametrization: one polynomial in `params` per chart
  /// variable. Used for witness arcs and to sample tangent directions.
  Symbols params;
  std::vector<MultiPoly> parametrization;

  nlohmann::json to_json() const;
};

CandidateSubvariety candidate_from_json(const nlohmann::json& js, const ConnectionData& conn,
                                        const std::string& where = "");

/// Non-degenerate jets of S with d' disk variables along random polynomial
/// arcs through the candidate's parametrization (the identity for Z = S).
/// Empty when Z has no parametrization or too few parameters.
std::vector<Jet> honest_jets(const ConnectionData& conn, const CandidateSubvariety& z, int dprime, int r,
                             std::size_t count, std::uint64_t seed);

/// Linear part of the period map at a point: rows are the standard chart
/// coordinates, columns the chart variables of S.
QMatrix period_differential(const ConnectionData& conn, const std::vector<Rational>& point);

/// Generic rank of the period map (exact, over the function field).
int period_rank(const ConnectionData& conn);

struct CandidateBound {
  std::string name;
  int dim_z = 0;
  std::optional<int> dim_c;
  std::optional<int> dim_phi;
  std::optional<int> contribution;
  std::optional<int> tau;  // running minimum
  std::string note;
};

struct TauTable {
  std::vector<CandidateBound> rows;
  std::optional<int> tau;
};

/// tau(i) = min(tau(i-1), dim C(Z_i) - dim phi(Z_i)) over candidates with
/// dim Z > d. Throws SamplingError when dim phi can be neither read nor
/// sampled.
TauTable upper_bound_candidates(const ConnectionData& conn, const std::vector<CandidateSubvariety>& cands,
                                const Catalog& cat, int d, std::uint64_t seed = 1);

struct CellRecord {
  std::string type;
  int dim_c = 0;
  int e = 0;
  CellStatus status = CellStatus::Unknown;
  std::string method;
  std::string cert_hash;
  nlohmann::json certificate;
  double ms = 0;
};

struct StageRecord {
  int r = 0;
  int E = 0;
  std::vector<CellRecord> cells;
  std::optional<int> kappa;

  const CellRecord* find(const std::string& type, int e) const;
  nlohmann::json to_json() const;
};

struct StageOptions {
  Budget budget = Budget::from_env();
  int jobs = 1;
  std::optional<int> E;
  std::uint64_t seed = 1;
  std::size_t arcs_per_candidate = 3;
  /// Cells empty at the previous order stay empty.
  const StageRecord* previous = nullptr;
  /// Sources of witness arcs; Z = S is always added.
  std::vector<CandidateSubvariety> candidates;
};

/// kappa(r) = min{dim C - e : cell (C, e) nonempty or unknown} - 1 over
/// 0 <= e <= min(E, d + 1). Throws InputError on an empty catalog.
StageRecord kappa_stage(const ConnectionData& conn, const Catalog& cat, int d, int r, const StageOptions& opt);

/// Honest jets re-checked against every empty cell: each must fail both the
/// g = Id point check and the fixed-jet solve. Returns the violations.
std::vector<std::string> audit_empty_cells(const ConnectionData& conn, const Catalog& cat, int d,
                                           const StageRecord& stage, const std::vector<Jet>& jets,
                                           const Budget& budget = Budget::from_env());

struct RunOptions {
  int d = 0;
  int rmax = 3;
  Budget budget = Budget::from_env();
  int jobs = 1;
  std::optional<int> E;
  std::uint64_t seed = 1;
  /// Keep running stages after convergence (audits of the whole schedule).
  bool full_schedule = false;
};

struct BoundReport {
  std::string problem;
  int d = 0;
  int rmax = 0;
  bool quasi_finite = false;
  std::vector<StageRecord> stages;
  TauTable tau;
  bool converged = false;
  std::vector<std::string> warnings;

  std::optional<int> kappa() const;
  std::string status() const;
  std::string summary() const;
  /// 0 converged/anytime, 3 when nothing was certified.
  int exit_code() const;
  /// Deterministic JSON; the "timing" field is excluded from "hash".
  nlohmann::json to_json() const;
};

BoundReport run_convergence(const ConnectionData& conn, const Catalog& cat,
                            const std::vector<CandidateSubvariety>& cands, const RunOptions& opt,
                            const std::string& problem_name = "");

std::string sha256_hex(std::string_view data);

}  // namespace hodgejet
