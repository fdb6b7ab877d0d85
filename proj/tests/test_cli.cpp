#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <random>
#include <sstream>
#include <string>

#include "lgi/cli.hpp"

using namespace lgi;
using namespace lgi::cli;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const fs::path kConfigs = LGI_CONFIG_DIR;

// A scratch directory removed on scope exit.
struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("lgi_test_" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return path / name;
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

int count_lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

json minimal_so3() {
  return json::parse(R"({
    "model": "lie_group_so3",
    "parameters": {"inertia": [0.6, 0.8, 1.1], "h": 0.1},
    "initial_state": {"W": [0.1, -0.2, 0.15]},
    "steps": 5
  })");
}

bool rejected(const json& j) {
  try {
    parse_scenario(j.dump());
  } catch (const ConfigError&) {
    return true;
  }
  return false;
}

}  // namespace

TEST_CASE("model ids round trip") {
  for (auto id : {ModelId::pair, ModelId::lie_group_so3, ModelId::heavy_top, ModelId::beanie,
                  ModelId::rigid_body_pair}) {
    CHECK(parse_model_id(to_string(id)) == id);
  }
  CHECK_THROWS_AS(parse_model_id("double_pendulum"), ConfigError);
}

TEST_CASE("parse_scenario fills defaults and reads every section") {
  const auto c = parse_scenario(minimal_so3().dump());
  CHECK(c.model == ModelId::lie_group_so3);
  CHECK(c.steps == 5);
  CHECK(c.h == 0.1);
  CHECK(c.method == SolverMethod::generic);
  CHECK(c.output.trajectory == "trajectory.csv");

  const auto ht = load_scenario(kConfigs / "heavy_top.json");
  CHECK(ht.model == ModelId::heavy_top);
  CHECK(ht.diagnostics.symplectic_every_k == 250);
  CHECK(ht.newton.jacobian_mode == JacobianMode::model_analytic);
  CHECK(ht.newton.residual_tol == 1e-13);
  CHECK(ht.output.directory == "out/heavy_top");
}

TEST_CASE("parse_scenario rejects malformed configurations") {
  CHECK_THROWS_AS(parse_scenario("{not json"), ConfigError);
  CHECK_THROWS_AS(load_scenario("/nonexistent/config.json"), ConfigError);

  auto j = minimal_so3();
  j["colour"] = "blue";
  CHECK(rejected(j));
  j = minimal_so3();
  j["parameters"]["hh"] = 0.1;
  CHECK(rejected(j));
  j = minimal_so3();
  j.erase("steps");
  CHECK(rejected(j));
  j = minimal_so3();
  j["steps"] = -1;
  CHECK(rejected(j));
  j = minimal_so3();
  j["steps"] = 2.5;
  CHECK(rejected(j));
  j = minimal_so3();
  j["model"] = "double_pendulum";
  CHECK(rejected(j));
  j = minimal_so3();
  j["parameters"]["h"] = 0.0;
  CHECK(rejected(j));
  j = minimal_so3();
  j["parameters"]["inertia"] = {1.0, 1.0, 3.0};  // triangle inequality
  CHECK(rejected(j));
  j = minimal_so3();
  j["initial_state"]["W"] = {4.0, 0.0, 0.0};  // angle beyond pi
  CHECK(rejected(j));
  j = minimal_so3();
  j["diagnostics"] = {{"reduction", true}};  // only for rigid_body_pair
  CHECK(rejected(j));
  j = minimal_so3();
  j["solver"] = {{"jacobian_mode", "secant"}};
  CHECK(rejected(j));
  j = minimal_so3();
  j["output"] = {{"trajectory", "x.csv"}, {"diagnostics", "x.csv"}};
  CHECK(rejected(j));

  auto top = json::parse(slurp(kConfigs / "heavy_top.json"));
  top["initial_state"]["gamma"] = {0.0, 0.6, 0.9};
  CHECK(rejected(top));
}

TEST_CASE("zero steps yields the initial row only") {
  TempDir tmp;
  auto j = minimal_so3();
  j["steps"] = 0;
  std::ostringstream err;
  CHECK(run_command(tmp.write("c.json", j.dump()), tmp.path / "out", err) == 0);
  CHECK(count_lines(slurp(tmp.path / "out" / "trajectory.csv")) == 2);
  const auto summary = json::parse(slurp(tmp.path / "out" / "summary.json"));
  CHECK(summary["steps_completed"] == 0);
  CHECK(summary["status"] == "ok");
}

TEST_CASE("malformed configs exit 2 and write nothing") {
  TempDir tmp;
  std::ostringstream err;
  CHECK(run_command(tmp.write("c.json", "{\"model\": "), tmp.path / "out", err) == 2);
  CHECK_FALSE(fs::exists(tmp.path / "out"));
  CHECK(err.str().find("config error") != std::string::npos);
}

TEST_CASE("identical configs produce byte-identical outputs") {
  TempDir tmp;
  for (const char* name : {"heavy_top.json", "beanie.json", "harmonic_oscillator.json"}) {
    std::ostringstream err;
    REQUIRE(run_command(kConfigs / name, tmp.path / "a", err) == 0);
    REQUIRE(run_command(kConfigs / name, tmp.path / "b", err) == 0);
    for (const char* file : {"trajectory.csv", "diagnostics.csv", "summary.json"}) {
      CHECK(slurp(tmp.path / "a" / file) == slurp(tmp.path / "b" / file));
    }
  }
}

TEST_CASE("the rigid body scenario conserves |Pi| through the CLI") {
  const auto c = load_scenario(kConfigs / "rigid_body.json");
  const auto r = run_scenario(c);
  REQUIRE_FALSE(r.failed_step);
  REQUIRE(r.charts.size() == 1001);
  const std::size_t i = r.conservation.index("pi_norm");
  REQUIRE(i < r.conservation.names.size());
  CHECK(r.conservation.max_rel_drift[i] <= 1e-11);
}

TEST_CASE("compare: identity and phi_l projections") {
  TempDir tmp;
  std::ostringstream err;
  CHECK(compare_command(kConfigs / "beanie.json", kConfigs / "beanie.json", "identity", tmp.path / "i",
                        err) == 0);
  CHECK(json::parse(slurp(tmp.path / "i" / "compare_summary.json"))["max_discrepancy"] == 0.0);

  CHECK(compare_command(kConfigs / "rigid_body_pair.json", kConfigs / "rigid_body_reduced.json", "phi_l",
                        tmp.path / "p", err) == 0);
  const double d = json::parse(slurp(tmp.path / "p" / "compare_summary.json"))["max_discrepancy"];
  CHECK(d <= 1e-8);
  CHECK(count_lines(slurp(tmp.path / "p" / "discrepancy.csv")) == 202);

  auto shorter = json::parse(slurp(kConfigs / "rigid_body_reduced.json"));
  shorter["steps"] = 10;
  CHECK(compare_command(kConfigs / "rigid_body_pair.json", tmp.write("s.json", shorter.dump()), "phi_l",
                        tmp.path / "q", err) == 2);
  CHECK(compare_command(kConfigs / "beanie.json", kConfigs / "beanie.json", "sideways", tmp.path / "q",
                        err) == 2);
  // phi_l needs rigid_body_pair on the left.
  CHECK(compare_command(kConfigs / "beanie.json", kConfigs / "beanie.json", "phi_l", tmp.path / "q", err) ==
        2);
}

TEST_CASE("solver failures exit 3 and name the step") {
  TempDir tmp;
  auto j = json::parse(slurp(kConfigs / "heavy_top.json"));
  j["steps"] = 20;
  j["solver"]["max_iters"] = 1;
  j["solver"]["residual_tol"] = 1e-16;
  std::ostringstream err;
  CHECK(run_command(tmp.write("c.json", j.dump()), tmp.path / "out", err) == 3);
  CHECK(err.str().find("step 1") != std::string::npos);
  // Partial results are still written.
  const auto summary = json::parse(slurp(tmp.path / "out" / "summary.json"));
  CHECK(summary["status"] != "ok");
  CHECK(summary["steps_completed"] == 0);
}

TEST_CASE("unwritable output directories exit 4") {
  TempDir tmp;
  const auto blocker = tmp.write("file", "x");
  std::ostringstream err;
  CHECK(run_command(tmp.write("c.json", minimal_so3().dump()), blocker / "sub", err) == 4);
  CHECK(err.str().find("i/o error") != std::string::npos);
}
