#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("hodgejet_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Result cli(const std::string& args) {
  const fs::path err = scratch() / "stderr.txt";
  const std::string cmd = std::string("\"") + HODGEJET_CLI + "\" " + args + " 2>\"" + err.string() + "\"";
  Result r;
  FILE* p = ::popen(cmd.c_str(), "r");
  REQUIRE(p);
  char buf[4096];
  for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, p)) > 0;) r.out.append(buf, n);
  const int st = ::pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  r.err = slurp(err);
  return r;
}

nlohmann::json example(const std::string& name) {
  return nlohmann::json::parse(slurp(fs::path(HODGEJET_DATA_DIR) / "examples" / (name + ".json")));
}

std::string write_problem(const std::string& file, const nlohmann::json& js) {
  const fs::path p = scratch() / file;
  std::ofstream(p) << js.dump(2);
  return "\"" + p.string() + "\"";
}

}  // namespace

TEST_CASE("run prints the summary line") {
  const auto r = cli("run examples/legendre.json --d 0");
  CHECK(r.code == 0);
  CHECK(r.out == "kappa=-1, tau=0, status=converged (Delta=0)\n");
}

TEST_CASE("run --check passes on every bundled example") {
  for (const std::string name : {"legendre", "product_legendre", "sym3_legendre"}) {
    const auto r = cli("run builtin:" + name + " --check");
    CHECK_MESSAGE(r.code == 0, name << ": " << r.err);
  }
  CHECK(cli("run builtin:product_legendre --d 1 --check").code == 0);
}

TEST_CASE("run --check fails on a wrong expectation") {
  auto js = example("legendre");
  js["expected"]["0"] = "kappa=0, tau=0, status=converged (Delta=1)";
  const auto r = cli("run " + write_problem("wrong.json", js) + " --check");
  CHECK(r.code == 1);
  CHECK(r.err.find("check: expected") != std::string::npos);
}

TEST_CASE("product run lists the diagonal cells") {
  const fs::path out = scratch() / "product.json";
  const auto r = cli("run examples/product_legendre.json --d 0 --rmax 2 --full-schedule --out \"" + out.string() + "\"");
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("kappa=-1,", 0) == 0);
  const auto rep = nlohmann::json::parse(slurp(out));
  REQUIRE(rep["stages"].size() == 2);
  for (const auto& stage : rep["stages"]) {
    CHECK(stage["kappa"] == -1);
    bool diag = false;
    for (const auto& c : stage["cells"])
      if (c["type"] == "diagonal" && c["e"] == 1) diag = c["status"] == "nonempty";
    CHECK(diag);
  }
}

TEST_CASE("rmax 0 writes a tau-only report") {
  const fs::path out = scratch() / "tau.json";
  const auto r = cli("run examples/legendre.json --rmax 0 --out \"" + out.string() + "\"");
  CHECK(r.code == 0);
  const auto rep = nlohmann::json::parse(slurp(out));
  CHECK(rep["stages"].empty());
  CHECK(rep["tau"] == 0);
}

TEST_CASE("reports are byte-identical apart from timing") {
  const fs::path a = scratch() / "a.json", b = scratch() / "b.json";
  REQUIRE(cli("run builtin:sym3_legendre --out \"" + a.string() + "\"").code == 0);
  REQUIRE(cli("run builtin:sym3_legendre --jobs 3 --out \"" + b.string() + "\"").code == 0);
  auto ja = nlohmann::json::parse(slurp(a)), jb = nlohmann::json::parse(slurp(b));
  CHECK(ja["hash"] == jb["hash"]);
  ja.erase("timing");
  jb.erase("timing");
  CHECK(ja.dump() == jb.dump());
  CHECK(ja["hash"].get<std::string>().size() == std::string("sha256:").size() + 64);
}

TEST_CASE("eta prints the period jet") {
  const auto r = cli("eta examples/legendre.json --jet \"lambda=2+t\" --r 3");
  REQUIRE(r.code == 0);
  const auto js = nlohmann::json::parse(r.out);
  CHECK(js.contains("A"));
  CHECK(js.contains("coords"));
  CHECK(js["A"][0][0]["0"] == "1");
}

TEST_CASE("padic valuation table") {
  const auto r = cli("padic examples/legendre.json --p 5 --s0 \"lambda=2\" --r 8");
  REQUIRE(r.code == 0);
  const auto js = nlohmann::json::parse(r.out);
  CHECK(js["bound_check"] == "PASS");
  CHECK(js["p"] == 5);
  CHECK(js["min_valuation"].size() == 9);
}

TEST_CASE("jet at order 0 echoes the base variety") {
  const auto r = cli("jet examples/product_legendre.json --d 2 --r 0");
  REQUIRE(r.code == 0);
  const auto js = nlohmann::json::parse(r.out);
  CHECK(js["symbols"].size() == 2);
  CHECK(js["ideal"].empty());
  CHECK(js["base"]["variables"] == nlohmann::json::array({"lambda1", "lambda2"}));
}

TEST_CASE("tlocus decides membership") {
  auto r = cli("tlocus examples/legendre.json --type point --jet \"lambda=2+t\" --r 1");
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["in_locus"] == "no");
  r = cli("tlocus examples/legendre.json --type P1 --jet \"lambda=2+t\" --r 1");
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["in_locus"] == "yes");
}

TEST_CASE("validate and examples") {
  auto r = cli("validate examples/legendre.json");
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["valid"] == true);
  r = cli("examples");
  CHECK(r.code == 0);
  CHECK(r.out.find("sym3_legendre") != std::string::npos);
  r = cli("examples legendre");
  CHECK(nlohmann::json::parse(r.out)["name"] == "legendre");
}

TEST_CASE("input errors exit with code 2") {
  auto js = example("legendre");
  js["connection"]["units"] = {"lambda"};
  auto r = cli("validate " + write_problem("unit.json", js));
  CHECK(r.code == 2);
  CHECK(r.err.find("/connection/c/lambda/1/0") != std::string::npos);
  CHECK(r.err.find("not a declared unit") != std::string::npos);

  js = example("legendre");
  js["catalog"] = "builtin:sym3_legendre";
  r = cli("run " + write_problem("shape.json", js));
  CHECK(r.code == 2);
  CHECK(r.err.find("shape") != std::string::npos);

  std::ofstream(scratch() / "broken.json") << "{";
  CHECK(cli("run \"" + (scratch() / "broken.json").string() + "\"").code == 2);
  CHECK(cli("run does/not/exist.json").code == 2);
  CHECK(cli("run examples/legendre.json --nonsense").code == 2);
  CHECK(cli("tlocus examples/legendre.json --type nope --jet \"lambda=2+t\"").code == 2);
}
