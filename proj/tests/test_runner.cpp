#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "macs/reports.hpp"
#include "macs/runner.hpp"
#include "support/checks.hpp"

using namespace macs;
using macs::testing::throws_code;

TEST_CASE("verification of the builtin scenarios") {
  for (const auto& name : builtin_scenario_names()) {
    const VerificationReport report = verify_scenario(builtin_scenario(name));
    CHECK(report.spanning_tree);
    CHECK(report.m_matrix);
    CHECK(report.stabilizable);
    CHECK(report.controllable);
    CHECK(report.epsilon_valid);
    CHECK(report.passed);
    CHECK(report.warnings.empty());
  }
}

TEST_CASE("verification failures map to the right checks") {
  Scenario scenario = builtin_scenario("paper-nominal");

  SUBCASE("broken topology") {
    scenario.graph = build_graph(7, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}});
    const VerificationReport report = verify_scenario(scenario);
    CHECK_FALSE(report.spanning_tree);
    CHECK_FALSE(report.m_matrix);
    CHECK_FALSE(report.passed);
    CHECK(throws_code(ErrorCode::structural_assumption_failed,
                      [&] { require_verified(scenario); }));
  }
  SUBCASE("unstabilizable dynamics") {
    Eigen::MatrixXd a(2, 2), b(2, 1);
    a << 1, 0, 0, -1;
    b << 0, 1;
    scenario.dynamics = AgentDynamics(a, b);
    const VerificationReport report = verify_scenario(scenario);
    CHECK_FALSE(report.stabilizable);
    CHECK_FALSE(report.passed);
    CHECK(throws_code(ErrorCode::synthesis_infeasible, [&] { require_verified(scenario); }));
  }
  SUBCASE("c0 at the boundary draws a warning") {
    scenario.initial_weights[2] = 0.0;
    const VerificationReport report = verify_scenario(scenario);
    CHECK(report.passed);
    REQUIRE(report.warnings.size() == 1);
    CHECK(report.warnings[0].find("c3(0)") != std::string::npos);
  }
}

TEST_CASE("robust verification requires controllability and epsilon") {
  Scenario scenario = builtin_scenario("paper-robust");

  SUBCASE("uncontrollable pair") {
    Eigen::MatrixXd a = -Eigen::MatrixXd::Identity(2, 2);
    Eigen::MatrixXd b(2, 1);
    b << 1, 0;
    scenario.dynamics = AgentDynamics(a, b);
    const VerificationReport report = verify_scenario(scenario);
    CHECK(report.stabilizable);       // stable A is always stabilizable
    CHECK_FALSE(report.controllable);
    CHECK_FALSE(report.passed);
    CHECK(throws_code(ErrorCode::synthesis_infeasible, [&] { require_verified(scenario); }));
  }
  SUBCASE("epsilon at the boundary") {
    scenario.epsilon = 1.0;
    const VerificationReport report = verify_scenario(scenario);
    CHECK_FALSE(report.epsilon_valid);
    CHECK_FALSE(report.passed);
    CHECK(throws_code(ErrorCode::invalid_epsilon, [&] { require_verified(scenario); }));
  }
}

TEST_CASE("analysis is a robust-mode operation") {
  CHECK(throws_code(ErrorCode::mode_mismatch,
                    [] { analyze_scenario(builtin_scenario("paper-nominal")); }));
  const AnalysisResult analysis = analyze_scenario(builtin_scenario("paper-robust"));
  CHECK(analysis.certificate.lambda0 > 0.0);
  CHECK(analysis.bound.radius_sq > 0.0);
  CHECK(analysis.bound.delta == doctest::Approx(1.0));
  // v0 = ||[0.1, 1.3]||: leader input bound 1 through B plus omega_0 bounds.
  CHECK(analysis.bound.omega_bound > 0.0);
}

TEST_CASE("run_scenario produces a coherent bundle") {
  Scenario scenario = builtin_scenario("paper-robust");
  scenario.sim.horizon = 2.0;  // keep the smoke test quick
  const RunResult result = run_scenario(scenario);
  CHECK(result.gains.mode == GainMode::robust);
  CHECK(result.trajectory.size() > 100);
  CHECK(result.trajectory.mode == GainMode::robust);
  CHECK(result.consensus.xi_norm_series.size() == result.trajectory.size());
  REQUIRE(result.analysis.has_value());
  CHECK(result.analysis->bound.radius_sq > 0.0);

  // Reports serialize without losing the headline fields.
  const auto gains_doc = gain_report_json(result.gains, scenario.dynamics);
  CHECK(gains_doc.contains("Q"));
  CHECK_FALSE(gains_doc.contains("P"));
  CHECK(gains_doc["residual_lambda_max"].get<double>() < 0.0);
  const auto analysis_doc = analysis_report_json(*result.analysis);
  CHECK(analysis_doc["g"].size() == 6);
  CHECK(analysis_doc["radius_sq"].get<double>() > 0.0);
  const auto consensus_doc = consensus_report_json(result.consensus, result.trajectory);
  CHECK(consensus_doc["xi_norm_series"].size() == result.trajectory.size());
}

TEST_CASE("pipeline handles third-order two-input agents") {
  Scenario scenario;
  scenario.name = "third-order";
  scenario.graph = build_graph(4, {{0, 1}, {1, 2}, {1, 3}});
  Eigen::MatrixXd a(3, 3), b(3, 2);
  a << 0, 1, 0, 0, 0, 1, -0.5, 0.2, -0.1;
  b << 0, 0, 1, 0, 0, 1;
  scenario.dynamics = AgentDynamics(a, b);
  scenario.mode = GainMode::robust;
  scenario.initial_weights = {1.0, 1.2, 1.1};
  scenario.phi = {0.1, 0.2, 0.1};
  scenario.epsilon = 1.5;
  scenario.sim = {1e-3, 2.0, 10};
  scenario.initial_states.seed = 4;

  const RunResult result = run_scenario(scenario);
  CHECK(result.gains.k.rows() == 2);
  CHECK(result.gains.k.cols() == 3);
  CHECK(result.trajectory.input_dim == 2);
  CHECK(result.trajectory.controls.back().size() == 6);
  REQUIRE(result.analysis.has_value());
  CHECK(result.analysis->bound.radius_sq > 0.0);
  CHECK(result.consensus.final_xi_norm >= 0.0);

  std::ostringstream out;
  write_trajectory_csv(result.trajectory, laplacian(scenario.graph), out);
  CHECK(out.str().rfind("t,x0_1,x0_2,x0_3,x1_1", 0) == 0);
}

TEST_CASE("fifty followers stay tractable") {
  // Long chain with shortcuts; short horizon keeps the test quick.
  std::vector<std::pair<int, int>> edges;
  for (int child = 1; child <= 50; ++child) edges.emplace_back(child - 1, child);
  for (int child = 5; child <= 50; child += 5) edges.emplace_back(child - 5, child);
  Scenario scenario;
  scenario.name = "chain-50";
  scenario.graph = build_graph(51, edges);
  Eigen::MatrixXd a(2, 2), b(2, 1);
  a << 0, 1, 0, 0;
  b << 0, 1;
  scenario.dynamics = AgentDynamics(a, b);
  scenario.mode = GainMode::nominal;
  scenario.initial_weights.assign(50, 1.0);
  scenario.sim = {1e-3, 1.0, 20};
  scenario.initial_states.seed = 9;

  const LaplacianPartition part = laplacian(scenario.graph);
  REQUIRE(is_nonsingular_m_matrix(part.l1));
  const ScalingCertificate cert = diagonal_scaling(part.l1);
  CHECK(cert.lambda0 > 0.0);

  const RunResult result = run_scenario(scenario);
  CHECK(result.trajectory.agent_count == 51);
  CHECK(std::isfinite(result.consensus.final_xi_norm));
}

TEST_CASE("trajectory CSV layout") {
  Scenario scenario = builtin_scenario("paper-nominal");
  scenario.sim.horizon = 0.5;
  const RunResult result = run_scenario(scenario);
  const LaplacianPartition part = laplacian(scenario.graph);
  std::ostringstream out;
  write_trajectory_csv(result.trajectory, part, out);
  const std::string text = out.str();
  CHECK(text.rfind("t,x0_1,x0_2,x1_1", 0) == 0);
  CHECK(text.find(",w1,") != std::string::npos);
  CHECK(text.find(",xi_norm\n") != std::string::npos);
  // Header plus one line per recorded step.
  const auto lines = std::count(text.begin(), text.end(), '\n');
  CHECK(lines == static_cast<long>(result.trajectory.size()) + 1);
}
