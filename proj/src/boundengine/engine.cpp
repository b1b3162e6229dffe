#include "hodgejet/boundengine/engine.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <thread>

namespace hodgejet {

namespace {

struct Parametrization {
  Symbols params;
  std::vector<MultiPoly> map;
};

std::optional<Parametrization> parametrization_of(const ConnectionData& conn, const CandidateSubvariety& z) {
  if (!z.parametrization.empty()) return Parametrization{z.params, z.parametrization};
  if (!z.ideal.is_zero_ideal() || !conn.chart.relations.is_zero_ideal()) return std::nullopt;
  Parametrization p{conn.chart.symbols, {}};
  for (std::size_t i = 0; i < conn.n(); ++i) p.map.push_back(MultiPoly::variable(conn.chart.symbols, i));
  return p;
}

Rational small_rational(std::mt19937_64& rng, int range, int den) {
  std::uniform_int_distribution<int> num(-range, range), dd(1, den);
  Rational q(num(rng), dd(rng));
  q.canonicalize();
  return q;
}

bool units_nonzero(const ConnectionData& conn, const std::vector<Rational>& pt) {
  for (const auto& u : *conn.units)
    if (u.evaluate(pt) == 0) return false;
  return true;
}

void short_basis(const std::string& text, nlohmann::json& into) {
  if (text.size() <= 4096) {
    into["basis"] = text;
  } else {
    into["basis_bytes"] = text.size();
    into["basis_sha256"] = sha256_hex(text);
  }
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  std::string out;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    out += buf;
  }
  return out;
}

nlohmann::json CandidateSubvariety::to_json() const {
  nlohmann::json js;
  js["name"] = name;
  js["ideal"] = nlohmann::json::array();
  for (const auto& g : ideal.generators()) js["ideal"].push_back(g.to_string());
  if (!type.empty()) js["type"] = type;
  if (dim_phi) js["dim_phi"] = *dim_phi;
  if (!parametrization.empty()) {
    js["parametrization"]["params"] = params->names();
    for (std::size_t i = 0; i < parametrization.size(); ++i)
      js["parametrization"]["map"][ideal.symbols()->name(i)] = parametrization[i].to_string();
  }
  return js;
}

CandidateSubvariety candidate_from_json(const nlohmann::json& js, const ConnectionData& conn,
                                        const std::string& where) {
  if (!js.is_object()) throw InputError("candidate must be an object", where);
  CandidateSubvariety z;
  if (!js.contains("name") || !js["name"].is_string()) throw InputError("candidate needs a name", where + "/name");
  z.name = js["name"].get<std::string>();
  const Symbols& S = conn.chart.symbols;
  std::vector<MultiPoly> gens;
  if (js.contains("ideal")) {
    if (!js["ideal"].is_array()) throw InputError("ideal must be a list of polynomials", where + "/ideal");
    for (std::size_t i = 0; i < js["ideal"].size(); ++i)
      gens.push_back(parse_poly(js["ideal"][i].get<std::string>(), S));
  }
  z.ideal = Ideal(S, std::move(gens));
  if (js.contains("type")) z.type = js["type"].get<std::string>();
  if (js.contains("lie_generators")) {
    const auto& lg = js["lie_generators"];
    for (std::size_t i = 0; i < lg.size(); ++i) {
      const auto m = static_cast<std::size_t>(conn.m());
      if (!lg[i].is_array() || lg[i].size() != m)
        throw InputError("Lie generator must be m x m", where + "/lie_generators/" + std::to_string(i));
      QMatrix x(m, m, Rational(0));
      for (std::size_t a = 0; a < m; ++a) {
        if (!lg[i][a].is_array() || lg[i][a].size() != m)
          throw InputError("Lie generator must be m x m", where + "/lie_generators/" + std::to_string(i));
        for (std::size_t b = 0; b < m; ++b)
          x(a, b) = parse_rational(lg[i][a][b].is_string() ? lg[i][a][b].get<std::string>()
                                                            : lg[i][a][b].dump());
      }
      z.lie_generators.push_back(std::move(x));
    }
  }
  if (z.type.empty() && z.lie_generators.empty())
    throw InputError("candidate needs a type name or Lie generators", where);
  if (js.contains("dim_phi")) z.dim_phi = js["dim_phi"].get<int>();
  if (js.contains("parametrization")) {
    const auto& p = js["parametrization"];
    const std::string pw = where + "/parametrization";
    if (!p.contains("params") || !p.contains("map")) throw InputError("needs params and map", pw);
    z.params = make_symbols(p["params"].get<std::vector<std::string>>());
    for (std::size_t i = 0; i < conn.n(); ++i) {
      const std::string& v = S->name(i);
      if (!p["map"].contains(v)) throw InputError("no image for variable " + v, pw + "/map");
      z.parametrization.push_back(parse_poly(p["map"][v].get<std::string>(), z.params));
    }
  }
  return z;
}

std::vector<Jet> honest_jets(const ConnectionData& conn, const CandidateSubvariety& z, int dprime, int r,
                             std::size_t count, std::uint64_t seed) {
  std::vector<Jet> out;
  const auto par = parametrization_of(conn, z);
  if (!par || r < 1) return out;
  const std::size_t k = par->params->size();
  if (k < static_cast<std::size_t>(dprime)) return out;
  std::mt19937_64 rng(seed ^ std::hash<std::string>{}(z.name));
  const auto alg = DiskAlgebra::get(dprime, r);
  const std::function<Rational(const Rational&)> id = [](const Rational& q) { return q; };
  for (int attempt = 0; attempt < 64 && out.size() < count; ++attempt) {
    std::vector<QSeries> s;
    for (std::size_t j = 0; j < k; ++j) {
      QSeries x = QSeries::constant(dprime, r, small_rational(rng, 9, 3));
      for (std::size_t a = 1; a < alg->size(); ++a) {
        const int w = index_weight(alg->basis[a]);
        if (w == 1) x[a] = small_rational(rng, 3, 1);
        else if (w == 2) x[a] = small_rational(rng, 2, 2);
      }
      s.push_back(std::move(x));
    }
    std::vector<QSeries> coords;
    for (const auto& f : par->map) coords.push_back(compose_poly<Rational>(f, s, id, dprime, r, Rational(0)));
    Jet j{conn.chart, dprime, r, std::move(coords)};
    if (!j.base_is_valid() || !units_nonzero(conn, j.base_point())) continue;
    QMatrix lin(conn.n(), static_cast<std::size_t>(dprime), Rational(0));
    for (std::size_t i = 0; i < conn.n(); ++i)
      for (int a = 0; a < dprime; ++a) lin(i, static_cast<std::size_t>(a)) = j.coords[i][alg->unit_index(a)];
    if (rank(lin) != static_cast<std::size_t>(dprime)) continue;
    if (!is_jet_on_variety(j, z.ideal.rebased(conn.chart.symbols)))
      throw InputError("parametrization of candidate " + z.name + " does not lie on its ideal");
    out.push_back(std::move(j));
  }
  return out;
}

QMatrix period_differential(const ConnectionData& conn, const std::vector<Rational>& point) {
  const auto ch = standard_chart(conn.shape);
  QMatrix D(ch.cells.size(), conn.n(), Rational(0));
  for (std::size_t v = 0; v < ch.cells.size(); ++v)
    for (std::size_t l = 0; l < conn.n(); ++l) {
      const auto [row, col] = ch.cells[v];
      D(v, l) = conn.c[l](static_cast<std::size_t>(col), static_cast<std::size_t>(row)).evaluate(point);
    }
  return D;
}

int period_rank(const ConnectionData& conn) {
  const auto ch = standard_chart(conn.shape);
  FractionMatrix D(ch.cells.size(), conn.n());
  for (std::size_t v = 0; v < ch.cells.size(); ++v)
    for (std::size_t l = 0; l < conn.n(); ++l) {
      const auto [row, col] = ch.cells[v];
      D(v, l) = conn.c[l](static_cast<std::size_t>(col), static_cast<std::size_t>(row));
    }
  return static_cast<int>(generic_rank(D, conn.chart, RankStrategy::Symbolic).rank);
}

TauTable upper_bound_candidates(const ConnectionData& conn, const std::vector<CandidateSubvariety>& cands,
                                const Catalog& cat, int d, std::uint64_t seed) {
  TauTable table;
  std::mt19937_64 rng(seed);
  for (const auto& z : cands) {
    CandidateBound row;
    row.name = z.name;
    row.dim_z = ideal_dimension(z.ideal + conn.chart.relations.rebased(z.ideal.symbols()));
    if (row.dim_z < 0) throw InputError("candidate " + z.name + " has an inconsistent ideal");
    if (row.dim_z <= d) {
      row.note = "skipped: dim Z = " + std::to_string(row.dim_z) + " <= d";
      row.tau = table.tau;
      table.rows.push_back(std::move(row));
      continue;
    }
    if (!z.type.empty()) {
      row.dim_c = cat.find(z.type).dim;
    } else {
      row.dim_c = orbit_dimension(z.lie_generators, standard_flag(conn.shape));
    }
    if (z.dim_phi) {
      row.dim_phi = z.dim_phi;
    } else {
      const auto par = parametrization_of(conn, z);
      if (!par)
        throw SamplingError("candidate " + z.name + ": declare dim_phi or give a parametrization to sample from");
      const std::size_t k = par->params->size();
      int best = -1;
      for (int attempt = 0; attempt < 40 && best < static_cast<int>(k); ++attempt) {
        std::vector<Rational> s0(k);
        for (auto& x : s0) x = small_rational(rng, 12, 5);
        std::vector<Rational> z0;
        for (const auto& f : par->map) z0.push_back(f.evaluate(s0));
        if (!units_nonzero(conn, z0)) continue;
        QMatrix J(conn.n(), k, Rational(0));
        for (std::size_t i = 0; i < conn.n(); ++i)
          for (std::size_t j = 0; j < k; ++j) J(i, j) = par->map[i].derivative(j).evaluate(s0);
        best = std::max(best, static_cast<int>(rank(period_differential(conn, z0) * J)));
        if (attempt >= 2 && best >= 0) break;
      }
      if (best < 0) throw SamplingError("candidate " + z.name + ": no admissible sample point");
      row.dim_phi = best;
      row.note = "dim phi sampled";
    }
    row.contribution = *row.dim_c - *row.dim_phi;
    table.tau = table.tau ? std::min(*table.tau, *row.contribution) : *row.contribution;
    row.tau = table.tau;
    table.rows.push_back(std::move(row));
  }
  return table;
}

const CellRecord* StageRecord::find(const std::string& type, int e) const {
  for (const auto& c : cells)
    if (c.type == type && c.e == e) return &c;
  return nullptr;
}

nlohmann::json StageRecord::to_json() const {
  nlohmann::json js;
  js["r"] = r;
  js["E"] = E;
  js["kappa"] = kappa ? nlohmann::json(*kappa) : nlohmann::json(nullptr);
  js["cells"] = nlohmann::json::array();
  for (const auto& c : cells)
    js["cells"].push_back({{"type", c.type},
                           {"dimC", c.dim_c},
                           {"e", c.e},
                           {"status", to_string(c.status)},
                           {"method", c.method},
                           {"cert", c.cert_hash},
                           {"certificate", c.certificate}});
  return js;
}

namespace {

struct CellTask {
  const TypeRep* type;
  int e;
};

CellRecord certify_cell(const ConnectionData& conn, const TypeRep& C, int e, int d, int r,
                        const std::vector<Jet>& jets, const StageOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  CellRecord rec;
  rec.type = C.name;
  rec.dim_c = C.dim;
  rec.e = e;
  auto finish = [&](CellStatus s, std::string method, nlohmann::json cert) {
    rec.status = s;
    rec.method = std::move(method);
    rec.certificate = std::move(cert);
    rec.cert_hash = "sha256:" + sha256_hex(rec.certificate.dump());
    rec.ms = elapsed_ms(t0);
    return rec;
  };
  if (opt.previous)
    if (const auto* prev = opt.previous->find(C.name, e); prev && prev->status == CellStatus::Empty)
      return finish(CellStatus::Empty, "inherited", {{"from_r", opt.previous->r}, {"cert", prev->cert_hash}});

  const LocusSystem sys = k_system(conn, C, e, d, r);
  const QMatrix id = identity_q(static_cast<std::size_t>(conn.m()));
  if (e <= C.dim) {
    for (const auto& j : jets)
      for (const auto& st : sys.strata) {
        const auto pt = stratum_point(st, conn, j, id);
        if (pt && satisfies(st, *pt))
          return finish(CellStatus::Nonempty, "witness", {{"chart", st.chart.id()}, {"g", "identity"}, {"jet", jet_to_json(j)}});
      }
    Budget small = opt.budget;
    small.time = std::max(std::chrono::milliseconds(1), opt.budget.time / 4);
    for (std::size_t i = 0; i < std::min<std::size_t>(2, jets.size()); ++i) {
      const auto res = k_emptiness(fix_jet(sys, jets[i]), small);
      if (res.status == CellStatus::Nonempty) {
        nlohmann::json cert{{"jet", jet_to_json(jets[i])}};
        short_basis(res.certificates.front(), cert);
        return finish(CellStatus::Nonempty, "fixed-jet solve", cert);
      }
    }
  }
  const auto res = k_emptiness(sys, opt.budget);
  nlohmann::json cert;
  cert["strata"] = nlohmann::json::array();
  for (const auto& c : res.certificates) {
    nlohmann::json s;
    short_basis(c, s);
    cert["strata"].push_back(std::move(s));
  }
  if (!res.note.empty()) cert["note"] = res.note;
  return finish(res.status, res.status == CellStatus::Unknown ? "budget" : "groebner", cert);
}

}  // namespace

StageRecord kappa_stage(const ConnectionData& conn, const Catalog& cat, int d, int r, const StageOptions& opt) {
  if (cat.types.empty())
    throw InputError("empty catalog: kappa needs at least the type of the full period image");
  if (r < 1) throw InputError("stages start at r = 1");
  StageRecord stage;
  stage.r = r;
  stage.E = std::min(opt.E ? *opt.E : period_rank(conn), d + 1);

  std::vector<CandidateSubvariety> sources = opt.candidates;
  if (std::none_of(sources.begin(), sources.end(), [](const auto& z) { return z.ideal.is_zero_ideal(); })) {
    CandidateSubvariety all;
    all.name = "S";
    all.ideal = Ideal(conn.chart.symbols);
    sources.push_back(std::move(all));
  }
  std::vector<Jet> jets;
  for (const auto& z : sources)
    for (auto& j : honest_jets(conn, z, d + 1, r, opt.arcs_per_candidate, opt.seed)) jets.push_back(std::move(j));

  std::vector<CellTask> tasks;
  for (const auto& C : cat.types)
    for (int e = 0; e <= stage.E; ++e) tasks.push_back({&C, e});
  stage.cells.resize(tasks.size());
  symbolic_period(conn, d + 1, r);  // shared by every cell

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < tasks.size();) {
      try {
        stage.cells[i] = certify_cell(conn, *tasks[i].type, tasks[i].e, d, r, jets, opt);
      } catch (const Error& ex) {
        CellRecord& c = stage.cells[i];
        c.type = tasks[i].type->name;
        c.dim_c = tasks[i].type->dim;
        c.e = tasks[i].e;
        c.status = CellStatus::Unknown;
        c.method = "error";
        c.certificate = {{"error", ex.what()}};
        c.cert_hash = "sha256:" + sha256_hex(c.certificate.dump());
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(opt.jobs, static_cast<int>(tasks.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (const auto& c : stage.cells)
    if (c.status != CellStatus::Empty) {
      const int v = c.dim_c - c.e - 1;
      stage.kappa = stage.kappa ? std::min(*stage.kappa, v) : v;
    }
  return stage;
}

std::vector<std::string> audit_empty_cells(const ConnectionData& conn, const Catalog& cat, int d,
                                           const StageRecord& stage, const std::vector<Jet>& jets,
                                           const Budget& budget) {
  std::vector<std::string> bad;
  const QMatrix id = identity_q(static_cast<std::size_t>(conn.m()));
  for (const auto& c : stage.cells) {
    if (c.status != CellStatus::Empty) continue;
    const LocusSystem sys = k_system(conn, cat.find(c.type), c.e, d, stage.r);
    for (std::size_t i = 0; i < jets.size(); ++i) {
      const std::string tag = c.type + " e=" + std::to_string(c.e) + " r=" + std::to_string(stage.r) +
                              " jet " + std::to_string(i);
      for (const auto& st : sys.strata) {
        const auto pt = stratum_point(st, conn, jets[i], id);
        if (pt && satisfies(st, *pt)) bad.push_back(tag + ": satisfies the system with g = Id");
      }
      if (k_emptiness(fix_jet(sys, jets[i]), budget).status == CellStatus::Nonempty)
        bad.push_back(tag + ": fixed-jet system is consistent");
    }
  }
  return bad;
}

std::optional<int> BoundReport::kappa() const {
  for (auto it = stages.rbegin(); it != stages.rend(); ++it)
    if (it->kappa) return it->kappa;
  return std::nullopt;
}

std::string BoundReport::status() const { return converged ? "converged" : "anytime"; }

std::string BoundReport::summary() const {
  const auto k = kappa();
  std::string s = "kappa=" + (k ? std::to_string(*k) : std::string("none")) +
                  ", tau=" + (tau.tau ? std::to_string(*tau.tau) : std::string("none")) + ", status=" + status();
  if (converged) return s + " (Delta=" + std::to_string(*tau.tau) + ")";
  std::vector<std::string> parts;
  if (k) parts.push_back("Delta>=" + std::to_string(*k + 1));
  if (tau.tau) parts.push_back("Delta<=" + std::to_string(*tau.tau));
  if (parts.empty()) return s;
  s += " (" + parts[0];
  if (parts.size() > 1) s += ", " + parts[1];
  return s + ")";
}

int BoundReport::exit_code() const {
  if (tau.tau) return 0;
  for (const auto& st : stages)
    for (const auto& c : st.cells)
      if (c.status != CellStatus::Unknown) return 0;
  return 3;
}

nlohmann::json BoundReport::to_json() const {
  nlohmann::json js;
  js["problem"] = problem;
  js["d"] = d;
  js["rmax"] = rmax;
  js["quasi_finite"] = quasi_finite;
  js["stages"] = nlohmann::json::array();
  nlohmann::json timing = nlohmann::json::object();
  for (const auto& st : stages) {
    js["stages"].push_back(st.to_json());
    for (const auto& c : st.cells)
      timing["r=" + std::to_string(st.r) + " " + c.type + " e=" + std::to_string(c.e)] = std::round(c.ms * 1000) / 1000;
  }
  js["candidates"] = nlohmann::json::array();
  for (const auto& row : tau.rows) {
    nlohmann::json c{{"name", row.name}, {"dimZ", row.dim_z}};
    auto opt = [](const std::optional<int>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
    c["dimC"] = opt(row.dim_c);
    c["dimPhi"] = opt(row.dim_phi);
    c["contribution"] = opt(row.contribution);
    c["tau"] = opt(row.tau);
    if (!row.note.empty()) c["note"] = row.note;
    js["candidates"].push_back(std::move(c));
  }
  const auto k = kappa();
  js["kappa"] = k ? nlohmann::json(*k) : nlohmann::json(nullptr);
  js["tau"] = tau.tau ? nlohmann::json(*tau.tau) : nlohmann::json(nullptr);
  js["status"] = status();
  if (converged) js["delta"] = *tau.tau;
  js["summary"] = summary();
  js["warnings"] = warnings;
  js["hash"] = "sha256:" + sha256_hex(js.dump());
  js["timing"] = std::move(timing);
  return js;
}

BoundReport run_convergence(const ConnectionData& conn, const Catalog& cat,
                            const std::vector<CandidateSubvariety>& cands, const RunOptions& opt,
                            const std::string& problem_name) {
  BoundReport rep;
  rep.problem = problem_name;
  rep.d = opt.d;
  rep.rmax = opt.rmax;
  rep.quasi_finite = conn.quasi_finite.value_or(false);
  rep.tau = upper_bound_candidates(conn, cands, cat, opt.d, opt.seed);
  for (int r = 1; r <= opt.rmax; ++r) {
    StageOptions so;
    so.budget = opt.budget;
    so.jobs = opt.jobs;
    so.E = opt.E;
    so.seed = opt.seed + static_cast<std::uint64_t>(r);
    so.candidates = cands;
    so.previous = rep.stages.empty() ? nullptr : &rep.stages.back();
    StageRecord st = kappa_stage(conn, cat, opt.d, r, so);
    if (so.previous && so.previous->kappa && st.kappa && *st.kappa < *so.previous->kappa)
      throw Error("kappa decreased from r = " + std::to_string(r - 1) + " to r = " + std::to_string(r));
    rep.stages.push_back(std::move(st));
    const auto k = rep.stages.back().kappa;
    if (k && rep.tau.tau && *k + 1 > *rep.tau.tau)
      rep.warnings.push_back("kappa + 1 exceeds tau at r = " + std::to_string(r) +
                             "; a candidate or catalog entry is inconsistent");
    if (rep.quasi_finite && k && rep.tau.tau && *k + 1 == *rep.tau.tau) {
      rep.converged = true;
      if (!opt.full_schedule) break;
    }
  }
  return rep;
}

}  // namespace hodgejet
