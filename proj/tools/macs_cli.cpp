// Command-line front end. Links the shared C API only; all numerics live
// behind libmacs.

#include <cstdio>
#include <filesystem>
#include <future>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "macs/macs.h"

namespace {

// Exit codes: 0 success, 1 failed check/assumption, 2 schema or input
// error, 3 numerical failure or divergence.
int exit_code_for(macs_status status) {
  switch (status) {
    case MACS_OK: return 0;
    case MACS_ERR_CHECK_FAILED: return 1;
    case MACS_ERR_SCHEMA: return 2;
    case MACS_ERR_NUMERICAL: return 3;
    case MACS_ERR_INVALID_ARGUMENT: return 2;
    case MACS_ERR_IO: return 2;
  }
  return 3;
}

std::string fmt6(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.6g", value);
  return buffer;
}

struct ScenarioHandle {
  macs_scenario* ptr = nullptr;
  ~ScenarioHandle() { macs_scenario_free(ptr); }
};

struct JsonString {
  char* ptr = nullptr;
  ~JsonString() { macs_free_string(ptr); }
};

int open_scenario(const std::string& path, double dt, double horizon, ScenarioHandle& handle) {
  const macs_status status = macs_scenario_open(path.c_str(), &handle.ptr);
  if (status != MACS_OK) {
    std::fprintf(stderr, "error: %s\n", macs_last_error());
    return exit_code_for(status);
  }
  if (dt > 0.0) macs_scenario_set_dt(handle.ptr, dt);
  if (horizon > 0.0) macs_scenario_set_horizon(handle.ptr, horizon);
  return 0;
}

int cmd_verify(const std::string& scenario_path, double dt, double horizon) {
  ScenarioHandle handle;
  if (int rc = open_scenario(scenario_path, dt, horizon, handle); rc != 0) return rc;
  JsonString report;
  const macs_status status = macs_verify(handle.ptr, &report.ptr);
  if (report.ptr != nullptr) {
    std::printf("%s\n", report.ptr);
  } else {
    std::fprintf(stderr, "error: %s\n", macs_last_error());
  }
  return exit_code_for(status);
}

int cmd_synthesize(const std::string& scenario_path, const std::string& out_dir, double dt,
                   double horizon) {
  ScenarioHandle handle;
  if (int rc = open_scenario(scenario_path, dt, horizon, handle); rc != 0) return rc;
  JsonString report;
  const macs_status status = macs_synthesize(handle.ptr, &report.ptr);
  if (status != MACS_OK) {
    std::fprintf(stderr, "error: %s\n", macs_last_error());
    return exit_code_for(status);
  }
  std::filesystem::create_directories(out_dir);
  const std::string path = out_dir + "/gains.json";
  if (FILE* f = std::fopen(path.c_str(), "wb"); f != nullptr) {
    std::fputs(report.ptr, f);
    std::fputc('\n', f);
    std::fclose(f);
  } else {
    std::fprintf(stderr, "error: cannot write %s\n", path.c_str());
    return 2;
  }
  const auto doc = nlohmann::json::parse(report.ptr);
  std::printf("wrote %s (mode=%s, residual_lambda_max=%s)\n", path.c_str(),
              doc["mode"].get<std::string>().c_str(),
              fmt6(doc["residual_lambda_max"].get<double>()).c_str());
  return 0;
}

int cmd_analyze(const std::string& scenario_path, const std::string& out_dir, double dt,
                double horizon) {
  ScenarioHandle handle;
  if (int rc = open_scenario(scenario_path, dt, horizon, handle); rc != 0) return rc;
  JsonString report;
  const macs_status status = macs_analyze(handle.ptr, &report.ptr);
  if (status != MACS_OK) {
    std::fprintf(stderr, "error: %s\n", macs_last_error());
    return exit_code_for(status);
  }
  std::filesystem::create_directories(out_dir);
  const std::string path = out_dir + "/bound_report.json";
  if (FILE* f = std::fopen(path.c_str(), "wb"); f != nullptr) {
    std::fputs(report.ptr, f);
    std::fputc('\n', f);
    std::fclose(f);
  } else {
    std::fprintf(stderr, "error: cannot write %s\n", path.c_str());
    return 2;
  }
  const auto doc = nlohmann::json::parse(report.ptr);
  std::printf("wrote %s (lambda0=%s, radius_sq=%s)\n", path.c_str(),
              fmt6(doc["lambda0"].get<double>()).c_str(),
              fmt6(doc["radius_sq"].get<double>()).c_str());
  return 0;
}

int simulate_one(const std::string& scenario_path, const std::string& out_dir, double dt,
                 double horizon) {
  ScenarioHandle handle;
  if (int rc = open_scenario(scenario_path, dt, horizon, handle); rc != 0) return rc;
  std::filesystem::create_directories(out_dir);
  JsonString report;
  const macs_status status = macs_simulate(handle.ptr, out_dir.c_str(), &report.ptr);
  if (status != MACS_OK) {
    std::fprintf(stderr, "error [%s]: %s\n", scenario_path.c_str(), macs_last_error());
    return exit_code_for(status);
  }
  const auto doc = nlohmann::json::parse(report.ptr);
  std::string convergence = "none";
  if (doc["convergence_time"].is_number()) {
    convergence = fmt6(doc["convergence_time"].get<double>());
  }
  std::printf("%s: final_xi_norm=%s convergence_time=%s tail_sup_xi_sq=%s -> %s\n",
              macs_scenario_name(handle.ptr),
              fmt6(doc["final_xi_norm"].get<double>()).c_str(), convergence.c_str(),
              fmt6(doc["empirical_tail_bound"].get<double>()).c_str(), out_dir.c_str());
  return 0;
}

int cmd_simulate(const std::vector<std::string>& scenario_paths, const std::string& out_dir,
                 double dt, double horizon, bool batch) {
  if (scenario_paths.size() == 1 && !batch) {
    return simulate_one(scenario_paths.front(), out_dir, dt, horizon);
  }
  // Batch mode: independent runs, each in its own subdirectory.
  std::vector<std::future<int>> jobs;
  jobs.reserve(scenario_paths.size());
  for (const auto& path : scenario_paths) {
    const std::string name = std::filesystem::path(path).stem().string();
    const std::string sub_dir = out_dir + "/" + name;
    jobs.push_back(std::async(std::launch::async, simulate_one, path, sub_dir, dt, horizon));
  }
  int worst = 0;
  for (auto& job : jobs) worst = std::max(worst, job.get());
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed adaptive leader-follower consensus toolkit"};
  app.require_subcommand(1);

  std::vector<std::string> scenarios;
  std::string out_dir = "out";
  double dt = 0.0;
  double horizon = 0.0;
  bool batch = false;

  std::string builtin_list = macs_builtin_names();
  for (auto& c : builtin_list) {
    if (c == '\n') c = ' ';
  }
  const std::string scenario_help =
      "scenario file path or builtin name (" + builtin_list + ")";

  auto* verify = app.add_subcommand("verify", "check structural assumptions and existence conditions");
  auto* synthesize = app.add_subcommand("synthesize", "solve the LMI and write the gain report");
  auto* analyze = app.add_subcommand("analyze", "write the ultimate-bound report (robust scenarios)");
  auto* simulate = app.add_subcommand("simulate", "run the closed loop and write trajectory + reports");

  for (auto* cmd : {verify, synthesize, analyze, simulate}) {
    cmd->add_option("--scenario", scenarios, scenario_help)->required();
    cmd->add_option("--dt", dt, "override integration step");
    cmd->add_option("--horizon", horizon, "override simulation horizon T");
  }
  for (auto* cmd : {synthesize, analyze, simulate}) {
    cmd->add_option("--out", out_dir, "output directory (default: out)");
  }
  simulate->add_flag("--batch", batch, "run multiple scenarios concurrently");

  CLI11_PARSE(app, argc, argv);

  if (scenarios.size() != 1 && !simulate->parsed()) {
    std::fprintf(stderr, "error: exactly one --scenario expected\n");
    return 2;
  }

  if (verify->parsed()) return cmd_verify(scenarios.front(), dt, horizon);
  if (synthesize->parsed()) return cmd_synthesize(scenarios.front(), out_dir, dt, horizon);
  if (analyze->parsed()) return cmd_analyze(scenarios.front(), out_dir, dt, horizon);
  return cmd_simulate(scenarios, out_dir, dt, horizon, batch);
}
