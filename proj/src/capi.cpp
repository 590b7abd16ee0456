#include "macs/macs.h"

#include <cstring>
#include <exception>
#include <sstream>
#include <string>

#include "macs/reports.hpp"
#include "macs/runner.hpp"
#include "macs/scenario.hpp"

struct macs_scenario {
  macs::Scenario scenario;
};

namespace {

thread_local std::string g_last_error;

void set_last_error(const std::string& message) { g_last_error = message; }

macs_status status_from_code(macs::ErrorCode code) {
  using macs::ErrorCode;
  switch (code) {
    case ErrorCode::structural_assumption_failed:
    case ErrorCode::synthesis_infeasible:
    case ErrorCode::invalid_epsilon:
    case ErrorCode::not_m_matrix:
      return MACS_ERR_CHECK_FAILED;
    case ErrorCode::schema_error:
      return MACS_ERR_SCHEMA;
    case ErrorCode::numerical_failure:
    case ErrorCode::divergence_detected:
    case ErrorCode::scaling_not_found:
      return MACS_ERR_NUMERICAL;
    case ErrorCode::io_error:
      return MACS_ERR_IO;
    default:
      return MACS_ERR_INVALID_ARGUMENT;
  }
}

char* copy_string(const std::string& text) {
  char* out = new char[text.size() + 1];
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

template <typename Fn>
macs_status guarded(Fn&& fn) {
  try {
    const macs_status status = fn();
    if (status == MACS_OK) g_last_error.clear();
    return status;
  } catch (const macs::Error& err) {
    set_last_error(err.what());
    return status_from_code(err.code());
  } catch (const std::exception& err) {
    set_last_error(err.what());
    return MACS_ERR_NUMERICAL;
  } catch (...) {
    set_last_error("unknown failure");
    return MACS_ERR_NUMERICAL;
  }
}

}  // namespace

extern "C" {

const char* macs_version(void) { return "0.1.0"; }

const char* macs_last_error(void) { return g_last_error.c_str(); }

const char* macs_status_name(macs_status status) {
  switch (status) {
    case MACS_OK: return "ok";
    case MACS_ERR_CHECK_FAILED: return "check_failed";
    case MACS_ERR_SCHEMA: return "schema_error";
    case MACS_ERR_NUMERICAL: return "numerical_error";
    case MACS_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case MACS_ERR_IO: return "io_error";
  }
  return "unknown";
}

macs_status macs_scenario_open(const char* path_or_name, macs_scenario** out) {
  if (path_or_name == nullptr || out == nullptr) {
    set_last_error("null argument");
    return MACS_ERR_INVALID_ARGUMENT;
  }
  *out = nullptr;
  return guarded([&] {
    auto handle = new macs_scenario{macs::open_scenario(path_or_name)};
    *out = handle;
    return MACS_OK;
  });
}

void macs_scenario_free(macs_scenario* scenario) { delete scenario; }

const char* macs_builtin_names(void) {
  static const std::string names = [] {
    std::ostringstream out;
    for (const auto& name : macs::builtin_scenario_names()) out << name << "\n";
    return out.str();
  }();
  return names.c_str();
}

const char* macs_scenario_name(const macs_scenario* scenario) {
  return scenario == nullptr ? "" : scenario->scenario.name.c_str();
}

macs_status macs_scenario_set_dt(macs_scenario* scenario, double dt) {
  if (scenario == nullptr) {
    set_last_error("null scenario");
    return MACS_ERR_INVALID_ARGUMENT;
  }
  if (!(dt > 0.0)) {
    set_last_error("dt must be positive");
    return MACS_ERR_INVALID_ARGUMENT;
  }
  scenario->scenario.sim.dt = dt;
  scenario->scenario.content_hash = macs::scenario_content_hash(scenario->scenario);
  return MACS_OK;
}

macs_status macs_scenario_set_horizon(macs_scenario* scenario, double horizon) {
  if (scenario == nullptr) {
    set_last_error("null scenario");
    return MACS_ERR_INVALID_ARGUMENT;
  }
  if (!(horizon > 0.0)) {
    set_last_error("horizon must be positive");
    return MACS_ERR_INVALID_ARGUMENT;
  }
  scenario->scenario.sim.horizon = horizon;
  scenario->scenario.content_hash = macs::scenario_content_hash(scenario->scenario);
  return MACS_OK;
}

macs_status macs_verify(const macs_scenario* scenario, char** report_json) {
  if (scenario == nullptr || report_json == nullptr) {
    set_last_error("null argument");
    return MACS_ERR_INVALID_ARGUMENT;
  }
  *report_json = nullptr;
  return guarded([&] {
    const auto report = macs::verify_scenario(scenario->scenario);
    *report_json = copy_string(macs::verification_report_json(report).dump(2));
    if (!report.passed) {
      set_last_error("scenario failed verification");
      return MACS_ERR_CHECK_FAILED;
    }
    return MACS_OK;
  });
}

macs_status macs_synthesize(const macs_scenario* scenario, char** report_json) {
  if (scenario == nullptr || report_json == nullptr) {
    set_last_error("null argument");
    return MACS_ERR_INVALID_ARGUMENT;
  }
  *report_json = nullptr;
  return guarded([&] {
    macs::require_verified(scenario->scenario);
    const macs::GainSet gains = macs::synthesize_scenario(scenario->scenario);
    *report_json =
        copy_string(macs::gain_report_json(gains, scenario->scenario.dynamics).dump(2));
    return MACS_OK;
  });
}

macs_status macs_analyze(const macs_scenario* scenario, char** report_json) {
  if (scenario == nullptr || report_json == nullptr) {
    set_last_error("null argument");
    return MACS_ERR_INVALID_ARGUMENT;
  }
  *report_json = nullptr;
  return guarded([&] {
    const macs::AnalysisResult analysis = macs::analyze_scenario(scenario->scenario);
    *report_json = copy_string(macs::analysis_report_json(analysis).dump(2));
    return MACS_OK;
  });
}

macs_status macs_simulate(const macs_scenario* scenario, const char* out_dir,
                          char** report_json) {
  if (scenario == nullptr || out_dir == nullptr || report_json == nullptr) {
    set_last_error("null argument");
    return MACS_ERR_INVALID_ARGUMENT;
  }
  *report_json = nullptr;
  return guarded([&] {
    const macs::RunResult result = macs::run_scenario(scenario->scenario);
    const macs::LaplacianPartition part = macs::laplacian(scenario->scenario.graph);
    const std::string dir(out_dir);

    std::ostringstream csv;
    macs::write_trajectory_csv(result.trajectory, part, csv);
    macs::write_text_file(dir + "/trajectory.csv", csv.str());
    macs::write_text_file(
        dir + "/gains.json",
        macs::gain_report_json(result.gains, scenario->scenario.dynamics).dump(2) + "\n");
    const std::string consensus =
        macs::consensus_report_json(result.consensus, result.trajectory).dump(2);
    macs::write_text_file(dir + "/consensus_report.json", consensus + "\n");
    if (result.analysis.has_value()) {
      macs::write_text_file(dir + "/bound_report.json",
                            macs::analysis_report_json(*result.analysis).dump(2) + "\n");
    }
    *report_json = copy_string(consensus);
    return MACS_OK;
  });
}

void macs_free_string(char* text) { delete[] text; }

}  // extern "C"
