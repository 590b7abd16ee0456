#include "macs/scenario.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace macs {

using nlohmann::json;

namespace {

[[noreturn]] void schema_fail(const std::string& path, const std::string& message) {
  throw Error(ErrorCode::schema_error, path + ": " + message);
}

const json& require(const json& obj, const std::string& path, const std::string& key) {
  if (!obj.is_object()) schema_fail(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) schema_fail(path + "/" + key, "missing required field");
  return *it;
}

double require_number(const json& obj, const std::string& path, const std::string& key) {
  const json& value = require(obj, path, key);
  if (!value.is_number()) schema_fail(path + "/" + key, "expected a number");
  return value.get<double>();
}

double optional_number(const json& obj, const std::string& path, const std::string& key,
                       double fallback) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  if (!obj.at(key).is_number()) schema_fail(path + "/" + key, "expected a number");
  return obj.at(key).get<double>();
}

int require_int(const json& obj, const std::string& path, const std::string& key) {
  const json& value = require(obj, path, key);
  if (!value.is_number_integer()) schema_fail(path + "/" + key, "expected an integer");
  return value.get<int>();
}

Eigen::MatrixXd parse_matrix(const json& value, const std::string& path) {
  if (!value.is_array() || value.empty()) schema_fail(path, "expected a nonempty 2-D array");
  const std::size_t rows = value.size();
  std::size_t cols = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    const json& row = value[r];
    if (!row.is_array() || row.empty()) {
      schema_fail(path + "/" + std::to_string(r), "expected a nonempty row array");
    }
    if (r == 0) {
      cols = row.size();
    } else if (row.size() != cols) {
      schema_fail(path + "/" + std::to_string(r), "ragged row");
    }
  }
  Eigen::MatrixXd m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const json& cell = value[r][c];
      if (!cell.is_number()) {
        schema_fail(path + "/" + std::to_string(r) + "/" + std::to_string(c), "expected a number");
      }
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = cell.get<double>();
    }
  }
  return m;
}

// Scalars broadcast to all followers; arrays must have one entry each.
std::vector<double> parse_follower_values(const json& value, const std::string& path,
                                          int followers) {
  std::vector<double> out;
  if (value.is_number()) {
    out.assign(followers, value.get<double>());
    return out;
  }
  if (!value.is_array()) schema_fail(path, "expected a number or an array");
  if (static_cast<int>(value.size()) != followers) {
    schema_fail(path, "expected " + std::to_string(followers) + " entries (one per follower)");
  }
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (!value[i].is_number()) schema_fail(path + "/" + std::to_string(i), "expected a number");
    out.push_back(value[i].get<double>());
  }
  return out;
}

DisturbanceTerm parse_term(const json& value, const std::string& path, int state_dim) {
  if (!value.is_object()) schema_fail(path, "expected a term object");
  const json& type = require(value, path, "type");
  if (!type.is_string()) schema_fail(path + "/type", "expected a string");
  const std::string kind = type.get<std::string>();

  DisturbanceTerm term;
  term.amplitude = require_number(value, path, "amp");
  if (kind == "sin" || kind == "cos") {
    term.kind = kind == "sin" ? TermKind::sine : TermKind::cosine;
    term.frequency = require_number(value, path, "freq");
    term.phase = optional_number(value, path, "phase", 0.0);
  } else if (kind == "exp_decay") {
    term.kind = TermKind::exp_decay;
    term.frequency = require_number(value, path, "rate");
    if (term.frequency < 0.0) schema_fail(path + "/rate", "decay rate must be >= 0");
  } else if (kind == "sin_state" || kind == "inv_quad_state") {
    term.kind = kind == "sin_state" ? TermKind::sin_state : TermKind::inv_quad_state;
    const int index = require_int(value, path, "index");
    if (index < 0 || index >= state_dim) {
      schema_fail(path + "/index", "state component index out of range");
    }
    term.state_index = index;
  } else {
    schema_fail(path + "/type", "unknown term type '" + kind + "'");
  }
  return term;
}

std::vector<std::vector<DisturbanceTerm>> parse_components(const json& value,
                                                           const std::string& path,
                                                           int expected, int state_dim) {
  if (!value.is_array()) schema_fail(path, "expected an array of per-component term lists");
  std::vector<std::vector<DisturbanceTerm>> components;
  if (value.empty()) return components;
  if (static_cast<int>(value.size()) != expected) {
    schema_fail(path, "expected " + std::to_string(expected) + " component lists");
  }
  for (std::size_t k = 0; k < value.size(); ++k) {
    const std::string comp_path = path + "/" + std::to_string(k);
    const json& list = value[k];
    if (!list.is_array()) schema_fail(comp_path, "expected an array of terms");
    std::vector<DisturbanceTerm> terms;
    for (std::size_t j = 0; j < list.size(); ++j) {
      terms.push_back(parse_term(list[j], comp_path + "/" + std::to_string(j), state_dim));
    }
    components.push_back(std::move(terms));
  }
  return components;
}

json term_to_json(const DisturbanceTerm& term) {
  json value;
  value["amp"] = term.amplitude;
  switch (term.kind) {
    case TermKind::sine:
      value["type"] = "sin";
      value["freq"] = term.frequency;
      if (term.phase != 0.0) value["phase"] = term.phase;
      break;
    case TermKind::cosine:
      value["type"] = "cos";
      value["freq"] = term.frequency;
      if (term.phase != 0.0) value["phase"] = term.phase;
      break;
    case TermKind::exp_decay:
      value["type"] = "exp_decay";
      value["rate"] = term.frequency;
      break;
    case TermKind::sin_state:
      value["type"] = "sin_state";
      value["index"] = term.state_index;
      break;
    case TermKind::inv_quad_state:
      value["type"] = "inv_quad_state";
      value["index"] = term.state_index;
      break;
  }
  return value;
}

json components_to_json(const std::vector<std::vector<DisturbanceTerm>>& components) {
  json value = json::array();
  for (const auto& terms : components) {
    json list = json::array();
    for (const auto& term : terms) list.push_back(term_to_json(term));
    value.push_back(std::move(list));
  }
  return value;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::uint64_t fnv1a_hash(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

Scenario parse_scenario(const json& doc) {
  if (!doc.is_object()) schema_fail("/", "scenario must be a JSON object");
  Scenario scenario;

  if (doc.contains("name")) {
    if (!doc.at("name").is_string()) schema_fail("/name", "expected a string");
    scenario.name = doc.at("name").get<std::string>();
  }
  if (doc.contains("description")) {
    if (!doc.at("description").is_string()) schema_fail("/description", "expected a string");
    scenario.description = doc.at("description").get<std::string>();
  }

  // graph
  const json& graph = require(doc, "", "graph");
  const int nodes = require_int(graph, "/graph", "nodes");
  if (nodes < 2) schema_fail("/graph/nodes", "need at least a leader and one follower");
  const json& edges = require(graph, "/graph", "edges");
  if (!edges.is_array()) schema_fail("/graph/edges", "expected an array of [parent, child] pairs");
  std::vector<std::pair<int, int>> edge_list;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string edge_path = "/graph/edges/" + std::to_string(i);
    const json& e = edges[i];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
      schema_fail(edge_path, "expected [parent, child] integers");
    }
    edge_list.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  try {
    scenario.graph = build_graph(nodes, edge_list);
  } catch (const Error& err) {
    schema_fail("/graph/edges", err.what());
  }
  const int followers = scenario.graph.follower_count();

  // dynamics
  const json& dynamics = require(doc, "", "dynamics");
  const Eigen::MatrixXd a = parse_matrix(require(dynamics, "/dynamics", "A"), "/dynamics/A");
  const Eigen::MatrixXd b = parse_matrix(require(dynamics, "/dynamics", "B"), "/dynamics/B");
  if (a.rows() != a.cols()) schema_fail("/dynamics/A", "A must be square");
  if (b.rows() != a.rows()) schema_fail("/dynamics/B", "B must have as many rows as A");
  scenario.dynamics = AgentDynamics(a, b);
  const int n = scenario.dynamics.state_dim();
  const int p = scenario.dynamics.input_dim();

  // protocol
  const json& protocol = require(doc, "", "protocol");
  const json& mode = require(protocol, "/protocol", "mode");
  if (!mode.is_string()) schema_fail("/protocol/mode", "expected a string");
  const std::string mode_name = mode.get<std::string>();
  if (mode_name == "nominal") {
    scenario.mode = GainMode::nominal;
    if (protocol.contains("d0")) schema_fail("/protocol/d0", "d0 belongs to robust mode");
    if (protocol.contains("phi")) schema_fail("/protocol/phi", "phi belongs to robust mode");
    if (protocol.contains("epsilon")) schema_fail("/protocol/epsilon", "epsilon belongs to robust mode");
    scenario.initial_weights =
        protocol.contains("c0")
            ? parse_follower_values(protocol.at("c0"), "/protocol/c0", followers)
            : std::vector<double>(followers, 1.0);
    for (std::size_t i = 0; i < scenario.initial_weights.size(); ++i) {
      if (scenario.initial_weights[i] < 0.0) {
        schema_fail("/protocol/c0/" + std::to_string(i), "c_i(0) must be >= 0");
      }
    }
  } else if (mode_name == "robust") {
    scenario.mode = GainMode::robust;
    if (protocol.contains("c0")) schema_fail("/protocol/c0", "c0 belongs to nominal mode");
    scenario.initial_weights =
        protocol.contains("d0")
            ? parse_follower_values(protocol.at("d0"), "/protocol/d0", followers)
            : std::vector<double>(followers, 1.5);
    for (std::size_t i = 0; i < scenario.initial_weights.size(); ++i) {
      if (scenario.initial_weights[i] < 1.0) {
        schema_fail("/protocol/d0/" + std::to_string(i), "d_i(0) must be >= 1");
      }
    }
    scenario.phi = protocol.contains("phi")
                       ? parse_follower_values(protocol.at("phi"), "/protocol/phi", followers)
                       : std::vector<double>(followers, 0.1);
    for (std::size_t i = 0; i < scenario.phi.size(); ++i) {
      if (scenario.phi[i] <= 0.0) {
        schema_fail("/protocol/phi/" + std::to_string(i), "phi must be positive");
      }
    }
    scenario.epsilon = require_number(protocol, "/protocol", "epsilon");
  } else {
    schema_fail("/protocol/mode", "expected 'nominal' or 'robust'");
  }

  // disturbances: one model per agent, leader first
  if (doc.contains("disturbances")) {
    const json& disturbances = doc.at("disturbances");
    if (!disturbances.is_array()) {
      schema_fail("/disturbances", "expected an array with one entry per agent");
    }
    if (!disturbances.empty()) {
      if (static_cast<int>(disturbances.size()) != followers + 1) {
        schema_fail("/disturbances",
                    "expected " + std::to_string(followers + 1) + " agent entries (leader first)");
      }
      for (std::size_t i = 0; i < disturbances.size(); ++i) {
        DisturbanceModel model;
        model.components = parse_components(disturbances[i],
                                            "/disturbances/" + std::to_string(i), n, n);
        scenario.disturbances.push_back(std::move(model));
      }
    }
  }

  // leader input
  if (doc.contains("leader_input")) {
    scenario.leader_input.components =
        parse_components(doc.at("leader_input"), "/leader_input", p, n);
  }

  // sim settings
  if (doc.contains("sim")) {
    const json& sim = doc.at("sim");
    scenario.sim.dt = optional_number(sim, "/sim", "dt", scenario.sim.dt);
    scenario.sim.horizon = optional_number(sim, "/sim", "T", scenario.sim.horizon);
    if (sim.contains("record_stride")) {
      scenario.sim.record_stride = require_int(sim, "/sim", "record_stride");
    }
    if (scenario.sim.dt <= 0.0) schema_fail("/sim/dt", "dt must be positive");
    if (scenario.sim.horizon <= 0.0) schema_fail("/sim/T", "T must be positive");
    if (scenario.sim.record_stride < 1) schema_fail("/sim/record_stride", "must be >= 1");
  }

  // initial states
  if (doc.contains("initial_states")) {
    const json& init = doc.at("initial_states");
    if (!init.is_object()) schema_fail("/initial_states", "expected an object");
    if (init.contains("values")) {
      const json& values = init.at("values");
      if (!values.is_array() || static_cast<int>(values.size()) != followers + 1) {
        schema_fail("/initial_states/values",
                    "expected " + std::to_string(followers + 1) + " agent states");
      }
      for (std::size_t i = 0; i < values.size(); ++i) {
        const std::string v_path = "/initial_states/values/" + std::to_string(i);
        const json& v = values[i];
        if (!v.is_array() || static_cast<int>(v.size()) != n) {
          schema_fail(v_path, "expected " + std::to_string(n) + " components");
        }
        Eigen::VectorXd x(n);
        for (int k = 0; k < n; ++k) {
          if (!v[k].is_number()) schema_fail(v_path + "/" + std::to_string(k), "expected a number");
          x(k) = v[k].get<double>();
        }
        scenario.initial_states.values.push_back(std::move(x));
      }
    } else {
      if (init.contains("seed")) {
        if (!init.at("seed").is_number_integer()) {
          schema_fail("/initial_states/seed", "expected an integer");
        }
        scenario.initial_states.seed = init.at("seed").get<std::uint64_t>();
      }
      scenario.initial_states.range =
          optional_number(init, "/initial_states", "range", scenario.initial_states.range);
      if (scenario.initial_states.range < 0.0) {
        schema_fail("/initial_states/range", "range must be nonnegative");
      }
    }
  }

  // metrics thresholds
  if (doc.contains("metrics")) {
    const json& metrics = doc.at("metrics");
    scenario.metrics.convergence_threshold = optional_number(
        metrics, "/metrics", "convergence_threshold", scenario.metrics.convergence_threshold);
    scenario.metrics.drift_threshold = optional_number(
        metrics, "/metrics", "drift_threshold", scenario.metrics.drift_threshold);
  }

  scenario.content_hash = scenario_content_hash(scenario);
  return scenario;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::io_error, "cannot open scenario file '" + path + "'");
  }
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& err) {
    throw Error(ErrorCode::schema_error, "invalid JSON in '" + path + "': " + err.what());
  }
  return parse_scenario(doc);
}

std::uint64_t scenario_content_hash(const Scenario& scenario) {
  return fnv1a_hash(scenario_to_json(scenario).dump());
}

json scenario_to_json(const Scenario& scenario) {
  json doc;
  doc["name"] = scenario.name;
  if (!scenario.description.empty()) doc["description"] = scenario.description;
  doc["graph"]["nodes"] = scenario.graph.node_count;
  json edges = json::array();
  for (const auto& [parent, child] : scenario.graph.edges) {
    edges.push_back(json::array({parent, child}));
  }
  doc["graph"]["edges"] = std::move(edges);
  doc["dynamics"]["A"] = matrix_to_json(scenario.dynamics.a);
  doc["dynamics"]["B"] = matrix_to_json(scenario.dynamics.b);

  json protocol;
  protocol["mode"] = gain_mode_name(scenario.mode);
  if (scenario.mode == GainMode::nominal) {
    protocol["c0"] = scenario.initial_weights;
  } else {
    protocol["d0"] = scenario.initial_weights;
    protocol["phi"] = scenario.phi;
    protocol["epsilon"] = scenario.epsilon;
  }
  doc["protocol"] = std::move(protocol);

  if (!scenario.disturbances.empty()) {
    json models = json::array();
    for (const auto& model : scenario.disturbances) {
      models.push_back(components_to_json(model.components));
    }
    doc["disturbances"] = std::move(models);
  }
  if (!scenario.leader_input.empty()) {
    doc["leader_input"] = components_to_json(scenario.leader_input.components);
  }

  doc["sim"]["dt"] = scenario.sim.dt;
  doc["sim"]["T"] = scenario.sim.horizon;
  doc["sim"]["record_stride"] = scenario.sim.record_stride;

  if (!scenario.initial_states.values.empty()) {
    json values = json::array();
    for (const auto& x : scenario.initial_states.values) {
      json row = json::array();
      for (Eigen::Index k = 0; k < x.size(); ++k) row.push_back(x(k));
      values.push_back(std::move(row));
    }
    doc["initial_states"]["values"] = std::move(values);
  } else {
    doc["initial_states"]["seed"] = scenario.initial_states.seed;
    doc["initial_states"]["range"] = scenario.initial_states.range;
  }

  doc["metrics"]["convergence_threshold"] = scenario.metrics.convergence_threshold;
  doc["metrics"]["drift_threshold"] = scenario.metrics.drift_threshold;
  return doc;
}

namespace {

// The built-in experiments share the 7-node leader-rooted topology, the
// double-integrator dynamics, and the disturbance suite below.
constexpr const char* kGraphAndDynamics = R"("graph": {
    "nodes": 7,
    "edges": [[0,1],[1,2],[2,3],[3,4],[4,5],[5,6],[1,4],[3,6]]
  },
  "dynamics": {
    "A": [[0.0, 1.0], [0.0, 0.0]],
    "B": [[0.0], [1.0]]
  })";

constexpr const char* kDisturbanceSuite = R"("disturbances": [
    [[{"type":"sin","amp":0.1,"freq":2.0}],  [{"type":"sin","amp":0.3,"freq":4.0}]],
    [[{"type":"sin","amp":0.2,"freq":3.5}],  [{"type":"cos","amp":0.3,"freq":2.5}]],
    [[{"type":"cos","amp":0.15,"freq":4.0}], [{"type":"sin","amp":0.2,"freq":5.0}]],
    [[{"type":"sin_state","amp":0.3,"index":1}], [{"type":"sin","amp":0.6,"freq":3.0}]],
    [[{"type":"exp_decay","amp":0.3,"rate":2.0}], [{"type":"cos","amp":0.15,"freq":3.0}]],
    [[{"type":"sin","amp":0.2,"freq":4.0}],  [{"type":"cos","amp":0.25,"freq":3.0}]],
    [[{"type":"sin","amp":0.3,"freq":5.0}],  [{"type":"inv_quad_state","amp":0.4,"index":0}]]
  ],
  "leader_input": [[{"type":"exp_decay","amp":1.0,"rate":0.1}]])";

std::string make_builtin(const std::string& name, const std::string& protocol,
                         bool disturbed, double horizon) {
  std::ostringstream out;
  out << "{\n  \"name\": \"" << name << "\",\n  "
      << "\"description\": \"Double-integrator agents on a representative 7-node "
         "leader-rooted topology (chain 0->1->...->6 plus shortcuts 1->4 and 3->6); "
         "initial states drawn from the recorded seed.\",\n  "
      << kGraphAndDynamics << ",\n  "
      << "\"protocol\": " << protocol << ",\n  ";
  if (disturbed) out << kDisturbanceSuite << ",\n  ";
  out << "\"sim\": {\"dt\": 0.001, \"T\": " << horizon << ", \"record_stride\": 10},\n  "
      << "\"initial_states\": {\"seed\": 7, \"range\": 1.0}\n}\n";
  return out.str();
}

const std::map<std::string, std::string>& builtin_table() {
  static const std::map<std::string, std::string> table = {
      {"paper-nominal",
       make_builtin("paper-nominal", R"({"mode": "nominal", "c0": 1.0})", false, 20.0)},
      {"paper-drift",
       make_builtin("paper-drift", R"({"mode": "nominal", "c0": 1.0})", true, 20.0)},
      {"paper-robust",
       make_builtin("paper-robust",
                    R"({"mode": "robust", "d0": 1.5, "phi": 0.1, "epsilon": 2.0})", true, 20.0)},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& builtin_scenario_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> list;
    for (const auto& [name, text] : builtin_table()) list.push_back(name);
    return list;
  }();
  return names;
}

bool is_builtin_scenario(const std::string& name) {
  return builtin_table().count(name) != 0;
}

const std::string& builtin_scenario_json(const std::string& name) {
  const auto it = builtin_table().find(name);
  if (it == builtin_table().end()) {
    throw Error(ErrorCode::invalid_argument, "unknown builtin scenario '" + name + "'");
  }
  return it->second;
}

Scenario builtin_scenario(const std::string& name) {
  return parse_scenario(json::parse(builtin_scenario_json(name)));
}

Scenario open_scenario(const std::string& path_or_name) {
  if (is_builtin_scenario(path_or_name)) return builtin_scenario(path_or_name);
  return load_scenario_file(path_or_name);
}

}  // namespace macs
