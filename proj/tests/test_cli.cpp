#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "dualconv/cli.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int exit_code = -1;
  std::string out;
};

Run run_binary(const std::string& args) {
  const std::string cmd = std::string(DUALCONV_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string config(const std::string& name) { return std::string(DUALCONV_EXAMPLES_DIR) + "/" + name; }

std::string write_temp(const std::string& name, const json& j) {
  const fs::path p = fs::temp_directory_path() / ("dualconv_test_" + name + ".json");
  std::ofstream(p) << j.dump();
  return p.string();
}

json run_json(const std::string& command, const std::string& file) {
  const Run r = run_binary(command + " --config " + file);
  INFO(r.out);
  return json::parse(r.out);
}

}  // namespace

TEST_CASE("schoenberg on the Gaussian generator with the boolean product passes") {
  const Run r = run_binary("schoenberg --config " + config("gaussian_schoenberg.json"));
  CHECK(r.exit_code == 0);
  const json rep = json::parse(r.out);
  CHECK(rep["pass"] == true);
  CHECK(rep["command"] == "schoenberg");
  CHECK(rep["product"] == "boolean");
  CHECK(rep["dualsemigroup"] == "primitive:1");
  for (const char* key : {"config_hash", "seed", "checks", "data", "wall_clock_seconds"}) CHECK(rep.contains(key));
  for (const auto& c : rep["checks"])
    for (const char* key : {"name", "value", "tolerance", "pass"}) CHECK(c.contains(key));
}

TEST_CASE("check-state reports failure in the body and exits 0") {
  const Run r = run_binary("check-state --config " + config("q_matrix.json"));
  CHECK(r.exit_code == 0);
  CHECK(json::parse(r.out)["pass"] == false);
  const Run cp = run_binary("check-cp --config " + config("gaussian_schoenberg.json"));
  CHECK(cp.exit_code == 0);
  CHECK(json::parse(cp.out)["pass"] == true);
}

TEST_CASE("configuration errors exit 2") {
  const std::string bad_product = write_temp("bad_product", {{"dualsemigroup", "primitive:1"}, {"product", "classical"}});
  CHECK(run_binary("exp --config " + bad_product).exit_code == 2);
  const std::string bad_dsg = write_temp("bad_dsg", {{"dualsemigroup", "torus:2"}});
  CHECK(run_binary("exp --config " + bad_dsg).exit_code == 2);
  CHECK(run_binary("exp --config /nonexistent/path.json").exit_code == 2);
  const fs::path garbage = fs::temp_directory_path() / "dualconv_test_garbage.json";
  std::ofstream(garbage) << "{not json";
  CHECK(run_binary("exp --config " + garbage.string()).exit_code == 2);
  CHECK(run_binary("frobnicate --config " + config("q_matrix.json")).exit_code == 2);
  CHECK(run_binary("exp").exit_code == 2);
}

TEST_CASE("computation errors exit 3") {
  json cfg = json::parse(std::ifstream(config("fock_free.json")));
  cfg["fock"] = {{"truncation", 1}};
  cfg["words"] = json::array({json::array({"x", "x", "x"})});
  CHECK(run_binary("fock --config " + write_temp("fock_trunc", cfg)).exit_code == 3);
}

TEST_CASE("each shipped configuration passes its command") {
  const std::vector<std::pair<std::string, std::string>> jobs{
      {"exp", "gaussian_schoenberg.json"}, {"schoenberg", "unitary_triple.json"},
      {"check-cp", "unitary_triple.json"}, {"trotter", "trotter_tensor.json"},
      {"joint", "joint_tensor.json"},      {"refine", "refine_monotone.json"},
      {"fock", "fock_free.json"},          {"laws", "laws_unitary2.json"},
      {"axioms", "laws_unitary2.json"}};
  for (const auto& [command, file] : jobs) {
    const Run r = run_binary(command + " --config " + config(file));
    CHECK_MESSAGE(r.exit_code == 0, command, " ", file, "\n", r.out);
  }
}

TEST_CASE("exp table content and CSV output") {
  const json rep = run_json("exp", config("gaussian_schoenberg.json"));
  REQUIRE(rep["pass"] == true);
  const Run csv = run_binary("exp --csv --config " + config("gaussian_schoenberg.json"));
  CHECK(csv.exit_code == 0);
  CHECK(csv.out.rfind("t,", 0) == 0);
  // boolean Gaussian: exp(tψ)(x x) = t at every t on the grid
  bool found = false;
  std::istringstream lines(csv.out);
  std::string line;
  std::getline(lines, line);
  while (std::getline(lines, line)) {
    if (line.find(",x x,") == std::string::npos) continue;
    const double t = std::stod(line.substr(0, line.find(',')));
    const std::string rest = line.substr(line.find(",x x,") + 5);
    CHECK(std::stod(rest) == doctest::Approx(t).epsilon(1e-12));
    found = true;
  }
  CHECK(found);
}

TEST_CASE("overrides and stdin") {
  const Run r = run_binary("check-state --degree 4 --config - < " + config("q_matrix.json"));
  CHECK(r.exit_code == 0);
  const json rep = json::parse(r.out);
  CHECK(rep["pass"] == false);
  const fs::path out = fs::temp_directory_path() / "dualconv_test_out.json";
  CHECK(run_binary("laws --out " + out.string() + " --config " + config("laws_unitary2.json")).exit_code == 0);
  CHECK(json::parse(std::ifstream(out))["command"] == "laws");
}

TEST_CASE("reports are deterministic apart from wall-clock time") {
  using namespace dualconv::cli;
  const json cfg = json::parse(std::ifstream(config("refine_monotone.json")));
  Options o;
  o.command = "refine";
  o.config = cfg;
  const Outcome a = run(o), b = run(o);
  CHECK(canonical_body(a.report) == canonical_body(b.report));
  CHECK(a.report["config_hash"] == config_hash(cfg));
  json other = cfg;
  other["seed"] = 4;
  CHECK(config_hash(other) != config_hash(cfg));
  o.seed = 5;
  const Outcome c = run(o);
  CHECK(c.report["seed"] == 5);
  CHECK(canonical_body(a.report).find("wall_clock_seconds") == std::string::npos);
}
