// hodgejet: command-line front end for the jet/period-map bound engine.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "hodgejet/boundengine/problem.hpp"
#include "hodgejet/gaussmanin/padic.hpp"

using namespace hodgejet;

namespace {

constexpr int kInvalid = 2;

Budget budget_from(long ms) {
  Budget b = Budget::from_env();
  if (ms > 0) b.time = std::chrono::milliseconds(ms);
  return b;
}

void emit(const nlohmann::json& js, const std::string& out) {
  const std::string text = js.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw InputError("cannot write " + out);
  f << text;
}

int cmd_run(const std::string& path, std::optional<int> d, std::optional<int> rmax, long budget_ms,
            const std::string& out, bool check, int jobs, bool full, std::optional<int> E) {
  const Problem pb = load_problem(path);
  RunOptions opt;
  opt.d = d.value_or(pb.d);
  opt.rmax = rmax.value_or(pb.rmax);
  opt.budget = budget_from(budget_ms > 0 ? budget_ms : pb.budget_ms.value_or(0));
  opt.jobs = jobs;
  opt.E = E ? E : pb.E;
  opt.full_schedule = full;
  const BoundReport rep = run_convergence(pb.conn, pb.catalog, pb.candidates, opt, pb.name);
  if (!out.empty()) emit(rep.to_json(), out);
  std::cout << rep.summary() << "\n";
  if (check) {
    const auto it = pb.expected.find(opt.d);
    if (it == pb.expected.end()) {
      std::cerr << "check: no expected summary for d=" << opt.d << "\n";
      return 1;
    }
    if (it->second != rep.summary()) {
      std::cerr << "check: expected '" << it->second << "'\n";
      return 1;
    }
    std::cerr << "check: ok\n";
  }
  return rep.exit_code();
}

int cmd_jet(const std::string& path, int d, int r, const std::string& out) {
  const Problem pb = load_problem(path);
  const JetChartSpace sp = prolong_ideal(pb.conn.chart, d, r);
  nlohmann::json js = sp.to_json();
  js["base"] = {{"variables", pb.conn.chart.symbols->names()},
                {"relations", nlohmann::json::parse(serialize_basis(pb.conn.chart.relations.generators()))}};
  emit(js, out);
  return 0;
}

int cmd_eta(const std::string& path, const std::string& jet, int r, const std::string& out) {
  const Problem pb = load_problem(path);
  const Jet j = parse_jet_spec(jet, pb.conn.chart, r);
  emit(period_jet(pb.conn, j).to_json(), out);
  return 0;
}

int cmd_tlocus(const std::string& path, const std::string& type, const std::string& jet, int r, long budget_ms,
               const std::string& out) {
  const Problem pb = load_problem(path);
  const Jet j = parse_jet_spec(jet, pb.conn.chart, r);
  const LocusSystem sys = t_locus_system(pb.conn, pb.catalog.find(type), j.d, r);
  const auto res = k_emptiness(fix_jet(sys, j), budget_from(budget_ms));
  nlohmann::json js;
  js["type"] = type;
  js["jet"] = jet_to_json(j);
  js["system"] = sys.to_json();
  js["in_locus"] = res.status == CellStatus::Nonempty   ? "yes"
                   : res.status == CellStatus::Empty ? "no"
                                                     : "unknown";
  js["certificates"] = nlohmann::json::array();
  for (const auto& c : res.certificates) js["certificates"].push_back("sha256:" + sha256_hex(c));
  emit(js, out);
  return res.status == CellStatus::Unknown ? 3 : 0;
}

int cmd_padic(const std::string& path, std::optional<long> p, const std::string& s0, std::optional<int> r,
              std::optional<int> precision, const std::string& out) {
  const Problem pb = load_problem(path);
  const PadicParams def = pb.padic.value_or(PadicParams{});
  const long prime = p.value_or(def.p);
  if (prime < 2) throw InputError("give a prime with --p");
  std::vector<Rational> base = def.s0;
  if (!s0.empty()) base = parse_jet_spec(s0, pb.conn.chart, 0).base_point();
  if (base.empty()) throw InputError("give a base point with --s0");
  const auto m = static_cast<std::size_t>(pb.conn.m());
  const PadicFrame f =
      padic_frame(pb.conn, prime, base, identity_q(m), r.value_or(def.r), precision.value_or(def.precision));
  emit(padic_report_json(f), out);
  return 0;
}

int cmd_validate(const std::string& path) {
  const std::string resolved = resolve_problem_path(path);
  std::ifstream in(resolved);
  if (!in) throw InputError("cannot open problem file " + path);
  const Problem pb = load_problem(path);
  std::cout << pb.validation_json().dump(2) << "\n";
  return 0;
}

int cmd_examples(const std::string& name) {
  if (name.empty()) {
    for (const auto& e : builtin_examples())
      std::cout << e << "\t" << resolve_problem_path("builtin:" + e) << "\n";
    return 0;
  }
  std::ifstream in(resolve_problem_path("builtin:" + name));
  if (!in) throw InputError("no bundled example named " + name);
  std::cout << in.rdbuf();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified bounds for period maps from jets of a Gauss-Manin connection"};
  app.require_subcommand(1);

  std::string problem, out, jet, type, s0, name;
  std::optional<int> d_opt, rmax_opt, E_opt, r_opt, prec_opt;
  std::optional<long> p_opt;
  long budget_ms = 0;
  int jobs = 1, d = 1, r = 1;
  bool check = false, full = false;

  auto* run = app.add_subcommand("run", "Run the kappa/tau bound engine");
  run->add_option("problem", problem, "Problem file")->required();
  run->add_option("--d", d_opt, "Jet dimension d (Delta_d)");
  run->add_option("--rmax", rmax_opt, "Largest jet order");
  run->add_option("--budget", budget_ms, "Per-decision time budget in ms");
  run->add_option("--out", out, "Write the report JSON here");
  run->add_option("--jobs", jobs, "Concurrent cells")->check(CLI::PositiveNumber);
  run->add_option("--E", E_opt, "Override the range of e");
  run->add_flag("--check", check, "Compare the summary with the problem's expected line");
  run->add_flag("--full-schedule", full, "Keep running stages after convergence");

  auto* jetc = app.add_subcommand("jet", "Prolonged chart ideal of J^d_r S");
  jetc->add_option("problem", problem)->required();
  jetc->add_option("--d", d, "Disk dimension")->check(CLI::NonNegativeNumber);
  jetc->add_option("--r", r, "Jet order")->check(CLI::NonNegativeNumber);
  jetc->add_option("--out", out);

  auto* eta = app.add_subcommand("eta", "Period jet along a rational jet");
  eta->add_option("problem", problem)->required();
  eta->add_option("--jet", jet, "e.g. \"lambda=2+t\"")->required();
  eta->add_option("--r", r, "Jet order")->check(CLI::NonNegativeNumber);
  eta->add_option("--out", out);

  auto* tl = app.add_subcommand("tlocus", "Is a jet in the T-locus of a type?");
  tl->add_option("problem", problem)->required();
  tl->add_option("--type", type, "Catalog type")->required();
  tl->add_option("--jet", jet, "e.g. \"lambda=2+t\"")->required();
  tl->add_option("--r", r, "Jet order")->check(CLI::NonNegativeNumber);
  tl->add_option("--budget", budget_ms, "Time budget in ms");
  tl->add_option("--out", out);

  auto* pa = app.add_subcommand("padic", "p-adic flat frame on a residue disk");
  pa->add_option("problem", problem)->required();
  pa->add_option("--p", p_opt, "Prime");
  pa->add_option("--s0", s0, "Base point, e.g. \"lambda=2\"");
  pa->add_option("--r", r_opt, "Order");
  pa->add_option("--precision", prec_opt, "Relative p-adic precision");
  pa->add_option("--out", out);

  auto* val = app.add_subcommand("validate", "Validate a problem file");
  val->add_option("problem", problem)->required();

  auto* ex = app.add_subcommand("examples", "List or print bundled example problems");
  ex->add_option("name", name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInvalid;
  }

  try {
    if (*run) return cmd_run(problem, d_opt, rmax_opt, budget_ms, out, check, jobs, full, E_opt);
    if (*jetc) return cmd_jet(problem, d, r, out);
    if (*eta) return cmd_eta(problem, jet, r, out);
    if (*tl) return cmd_tlocus(problem, type, jet, r, budget_ms, out);
    if (*pa) return cmd_padic(problem, p_opt, s0, r_opt, prec_opt, out);
    if (*val) return cmd_validate(problem);
    if (*ex) return cmd_examples(name);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const ShapeError& e) {
    std::cerr << "shape error: " << e.what() << "\n";
    return kInvalid;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return 0;
}
