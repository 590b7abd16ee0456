// Exercises the shared-library surface the way a foreign caller would:
// opaque handles, status codes, JSON strings.
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "macs/macs.h"

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& name)
      : path(std::filesystem::temp_directory_path() / name) {
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("builtin names are published") {
  const std::string names = macs_builtin_names();
  CHECK(names.find("paper-nominal") != std::string::npos);
  CHECK(names.find("paper-robust") != std::string::npos);
  CHECK(names.find("paper-drift") != std::string::npos);
  CHECK(std::string(macs_version()).size() > 0);
}

TEST_CASE("open, verify, synthesize through the C API") {
  macs_scenario* scenario = nullptr;
  REQUIRE(macs_scenario_open("paper-nominal", &scenario) == MACS_OK);
  CHECK(std::string(macs_scenario_name(scenario)) == "paper-nominal");

  char* verify_json = nullptr;
  CHECK(macs_verify(scenario, &verify_json) == MACS_OK);
  REQUIRE(verify_json != nullptr);
  const auto verify_doc = nlohmann::json::parse(verify_json);
  CHECK(verify_doc["passed"].get<bool>());
  macs_free_string(verify_json);

  char* gains_json = nullptr;
  CHECK(macs_synthesize(scenario, &gains_json) == MACS_OK);
  REQUIRE(gains_json != nullptr);
  const auto gains_doc = nlohmann::json::parse(gains_json);
  CHECK(gains_doc["mode"] == "nominal");
  CHECK(gains_doc.contains("P"));
  CHECK(gains_doc["residual_lambda_max"].get<double>() < 0.0);
  macs_free_string(gains_json);

  macs_scenario_free(scenario);
}

TEST_CASE("status codes for bad inputs") {
  macs_scenario* scenario = nullptr;
  CHECK(macs_scenario_open("does/not/exist.json", &scenario) == MACS_ERR_IO);
  CHECK(scenario == nullptr);

  // Schema violation: the error message names the offending field.
  const std::filesystem::path bad = std::filesystem::temp_directory_path() / "macs_bad.json";
  {
    std::ofstream out(bad);
    out << R"({"graph": {"nodes": 3, "edges": []}, "dynamics": {"A": [[0]], "B": [[1]]},
               "protocol": {"mode": "weird"}})";
  }
  CHECK(macs_scenario_open(bad.string().c_str(), &scenario) == MACS_ERR_SCHEMA);
  CHECK(std::string(macs_last_error()).find("/protocol/mode") != std::string::npos);
  std::filesystem::remove(bad);

  CHECK(macs_scenario_open(nullptr, &scenario) == MACS_ERR_INVALID_ARGUMENT);
  CHECK(macs_verify(nullptr, nullptr) == MACS_ERR_INVALID_ARGUMENT);
  CHECK(macs_scenario_set_dt(nullptr, 0.1) == MACS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("verification failure surfaces as a check status") {
  const std::filesystem::path path =
      std::filesystem::temp_directory_path() / "macs_isolated.json";
  {
    std::ofstream out(path);
    out << R"({
      "graph": {"nodes": 3, "edges": [[0,1]]},
      "dynamics": {"A": [[0.0,1.0],[0.0,0.0]], "B": [[0.0],[1.0]]},
      "protocol": {"mode": "nominal"}
    })";
  }
  macs_scenario* scenario = nullptr;
  REQUIRE(macs_scenario_open(path.string().c_str(), &scenario) == MACS_OK);
  char* report_json = nullptr;
  CHECK(macs_verify(scenario, &report_json) == MACS_ERR_CHECK_FAILED);
  REQUIRE(report_json != nullptr);
  const auto doc = nlohmann::json::parse(report_json);
  CHECK_FALSE(doc["spanning_tree"].get<bool>());
  CHECK_FALSE(doc["passed"].get<bool>());
  macs_free_string(report_json);
  macs_scenario_free(scenario);
  std::filesystem::remove(path);
}

TEST_CASE("analyze requires a robust scenario") {
  macs_scenario* scenario = nullptr;
  REQUIRE(macs_scenario_open("paper-nominal", &scenario) == MACS_OK);
  char* report_json = nullptr;
  CHECK(macs_analyze(scenario, &report_json) == MACS_ERR_INVALID_ARGUMENT);
  macs_scenario_free(scenario);

  REQUIRE(macs_scenario_open("paper-robust", &scenario) == MACS_OK);
  CHECK(macs_analyze(scenario, &report_json) == MACS_OK);
  REQUIRE(report_json != nullptr);
  const auto doc = nlohmann::json::parse(report_json);
  CHECK(doc["radius_sq"].get<double>() > 0.0);
  CHECK(doc["g"].size() == 6);
  macs_free_string(report_json);
  macs_scenario_free(scenario);
}

TEST_CASE("independent scenario runs can share the library across threads") {
  // Error state is thread-local and the core is pure, so concurrent runs
  // must neither interfere nor cross error messages.
  TempDir base("macs_capi_threads");
  std::vector<std::thread> workers;
  std::vector<int> results(4, -1);
  for (int worker = 0; worker < 4; ++worker) {
    workers.emplace_back([&, worker] {
      const char* name = worker % 2 == 0 ? "paper-nominal" : "paper-robust";
      macs_scenario* scenario = nullptr;
      if (macs_scenario_open(name, &scenario) != MACS_OK) return;
      macs_scenario_set_horizon(scenario, 0.5);
      const std::filesystem::path dir = base.path / std::to_string(worker);
      std::filesystem::create_directories(dir);
      char* report = nullptr;
      const macs_status status = macs_simulate(scenario, dir.string().c_str(), &report);
      // A deliberate failure on this thread must not leak elsewhere.
      macs_scenario* bogus = nullptr;
      macs_scenario_open("no-such-scenario.json", &bogus);
      results[worker] = status == MACS_OK && report != nullptr ? 0 : 1;
      macs_free_string(report);
      macs_scenario_free(scenario);
    });
  }
  for (auto& worker : workers) worker.join();
  for (int worker = 0; worker < 4; ++worker) CHECK(results[worker] == 0);
  for (int worker = 0; worker < 4; ++worker) {
    CHECK(std::filesystem::exists(base.path / std::to_string(worker) / "trajectory.csv"));
  }
}

TEST_CASE("simulate writes reproducible artifacts") {
  macs_scenario* scenario = nullptr;
  REQUIRE(macs_scenario_open("paper-robust", &scenario) == MACS_OK);
  REQUIRE(macs_scenario_set_horizon(scenario, 1.0) == MACS_OK);

  TempDir first("macs_capi_run1");
  char* report_json = nullptr;
  REQUIRE(macs_simulate(scenario, first.path.string().c_str(), &report_json) == MACS_OK);
  REQUIRE(report_json != nullptr);
  const auto doc = nlohmann::json::parse(report_json);
  CHECK(doc.contains("final_xi_norm"));
  macs_free_string(report_json);

  for (const char* name :
       {"trajectory.csv", "gains.json", "consensus_report.json", "bound_report.json"}) {
    CHECK(std::filesystem::exists(first.path / name));
  }

  // Identical scenario, identical bytes.
  TempDir second("macs_capi_run2");
  report_json = nullptr;
  REQUIRE(macs_simulate(scenario, second.path.string().c_str(), &report_json) == MACS_OK);
  macs_free_string(report_json);
  CHECK(slurp(first.path / "trajectory.csv") == slurp(second.path / "trajectory.csv"));
  CHECK(slurp(first.path / "consensus_report.json") ==
        slurp(second.path / "consensus_report.json"));

  macs_scenario_free(scenario);
}
