#include "rcd/serde.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "rcd/errors.hpp"
#include "rcd/transfer.hpp"

namespace rcd {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& context, const std::string& message) {
  throw ParseError(context + ": " + message);
}

const json& require_field(const json& j, const char* key, const std::string& context) {
  if (!j.is_object() || !j.contains(key))
    fail(context, std::string("missing field '") + key + "'");
  return j.at(key);
}

double number_field(const json& j, const char* key, const std::string& context) {
  const json& v = require_field(j, key, context);
  if (!v.is_number()) fail(context, std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

std::vector<double> coeff_array(const json& j, const char* key,
                                const std::string& context) {
  if (!j.contains(key)) return {};
  const json& v = j.at(key);
  if (!v.is_array()) fail(context, std::string("field '") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number())
      fail(context, std::string("field '") + key + "' must contain numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

int line_of_byte(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

}  // namespace

nlohmann::json arma_to_json(const ArmaModel& model) {
  return json{{"ar", model.ar}, {"ma", model.ma}, {"gain", model.gain}};
}

ArmaModel arma_from_json(const nlohmann::json& j, const std::string& context) {
  ArmaModel m;
  m.ar = coeff_array(j, "ar", context);
  m.ma = coeff_array(j, "ma", context);
  m.gain = number_field(j, "gain", context);
  return m;
}

ConfigDocument parse_config_text(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(origin, "line " + std::to_string(line_of_byte(text, e.byte)) + ": " + e.what());
  }
  if (!root.is_object()) fail(origin, "top level must be an object");

  ConfigDocument doc;
  const json& version = require_field(root, "version", origin);
  if (!version.is_number_integer() || version.get<int>() != 1)
    fail(origin, "unsupported config version (expected 1)");
  doc.version = 1;

  const json& graph = require_field(root, "graph", origin);
  doc.graph.type = require_field(graph, "type", origin + ".graph").get<std::string>();
  doc.graph.n = static_cast<int>(number_field(graph, "n", origin + ".graph"));
  if (graph.contains("p")) doc.graph.p = graph.at("p").get<double>();
  if (graph.contains("seed")) doc.graph.seed = graph.at("seed").get<std::uint64_t>();
  if (graph.contains("edges")) {
    for (const auto& e : graph.at("edges")) {
      if (!e.is_array() || e.size() != 2)
        fail(origin + ".graph.edges", "each edge must be a pair");
      doc.graph.edges.emplace_back(e.at(0).get<int>() - 1, e.at(1).get<int>() - 1);
    }
  }
  const json& weights = require_field(graph, "weights", origin + ".graph");
  doc.graph.weight_rule =
      require_field(weights, "rule", origin + ".graph.weights").get<std::string>();

  doc.gamma = root.contains("gamma") ? root.at("gamma").get<double>() : 0.0;

  const json& agents = require_field(root, "agents", origin);
  if (!agents.is_array() || agents.empty())
    fail(origin, "field 'agents' must be a non-empty array");
  int index = 1;
  for (const auto& entry : agents) {
    const std::string context = origin + ".agents[" + std::to_string(index) + "]";
    ArmaModel signal = arma_from_json(require_field(entry, "signal", context),
                                      context + ".signal");
    ArmaModel noise =
        arma_from_json(require_field(entry, "noise", context), context + ".noise");
    doc.agents.emplace_back(std::move(signal), std::move(noise));
    ++index;
  }
  if (static_cast<int>(doc.agents.size()) != doc.graph.n)
    fail(origin, "agents count (" + std::to_string(doc.agents.size()) +
                     ") does not match graph.n (" + std::to_string(doc.graph.n) + ")");
  return doc;
}

ConfigDocument load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open config file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path);
}

nlohmann::json config_to_json(const ConfigDocument& doc) {
  json graph{{"type", doc.graph.type}, {"n", doc.graph.n},
             {"weights", json{{"rule", doc.graph.weight_rule}}}};
  if (doc.graph.type == "erdos_renyi") {
    graph["p"] = doc.graph.p;
    graph["seed"] = doc.graph.seed;
  }
  if (doc.graph.type == "explicit") {
    json edges = json::array();
    for (const auto& [i, j] : doc.graph.edges) edges.push_back({i + 1, j + 1});
    graph["edges"] = edges;
  }
  json agents = json::array();
  for (const auto& [signal, noise] : doc.agents)
    agents.push_back(json{{"signal", arma_to_json(signal)}, {"noise", arma_to_json(noise)}});
  return json{{"version", doc.version},
              {"graph", graph},
              {"gamma", doc.gamma},
              {"agents", agents}};
}

Graph build_graph(const GraphSpec& spec) {
  if (spec.type == "erdos_renyi") return erdos_renyi(spec.n, spec.p, spec.seed);
  if (spec.type == "path") return path_graph(spec.n);
  if (spec.type == "complete") return complete_graph(spec.n);
  if (spec.type == "star") return star_graph(spec.n);
  if (spec.type == "explicit") return Graph(spec.n, spec.edges);
  throw ParseError("unknown graph type '" + spec.type + "'");
}

WeightMatrix build_weights(const GraphSpec& spec, const Graph& graph) {
  if (spec.weight_rule == "laplacian") return laplacian_weights(graph);
  if (spec.weight_rule == "metropolis") return metropolis_weights(graph);
  throw ParseError("unknown weight rule '" + spec.weight_rule + "'");
}

nlohmann::json graph_to_json(const Graph& graph) {
  json edges = json::array();
  for (const auto& [i, j] : graph.edges) edges.push_back({i + 1, j + 1});
  return json{{"n", graph.n}, {"edges", edges}};
}

nlohmann::json weights_to_json(const WeightMatrix& w) {
  json rows = json::array();
  for (int i = 0; i < w.n(); ++i) {
    json row = json::array();
    for (int j = 0; j < w.n(); ++j) row.push_back(w.entries(i, j));
    rows.push_back(row);
  }
  return json{{"n", w.n()}, {"rows", rows}, {"consensus_gap", w.consensus_gap}};
}

nlohmann::json report_to_json(const AsymptoticReport& r) {
  json informative = json::array();
  for (int i : r.informative_agents) informative.push_back(i + 1);
  json out{{"regime", to_string(r.regime)},
           {"rho", r.rho},
           {"alpha", r.alpha},
           {"beta_false_alarm", r.beta_false_alarm},
           {"beta_miss", r.beta_miss},
           {"informative_agents", informative},
           {"gamma", r.gamma},
           {"num_agents", r.num_agents},
           {"scaling", r.regime == Regime::ExponentialDecay ? "k+1" : "1"}};
  if (r.floor_false_alarm) out["floor_false_alarm"] = *r.floor_false_alarm;
  if (r.floor_miss) out["floor_miss"] = *r.floor_miss;
  if (r.regime == Regime::ErrorFloor)
    out["miss_floor_above_half"] = r.miss_floor_above_half;
  return out;
}

bool ValidationReport::all_ok() const {
  if (!graph_ok || !weights_ok) return false;
  for (const auto& a : agents)
    if (!a.ok) return false;
  return true;
}

ValidationReport validate_document(const ConfigDocument& doc) {
  ValidationReport report;

  Graph graph;
  try {
    graph = build_graph(doc.graph);
    if (!graph.connected()) throw AssumptionViolation(
        AssumptionViolation::Kind::DisconnectedGraph, "graph is not connected");
    report.graph_ok = true;
    report.graph_detail = std::to_string(graph.n) + " nodes, " +
                          std::to_string(graph.edges.size()) + " edges, connected";
  } catch (const Error& e) {
    report.graph_detail = e.what();
  }

  if (report.graph_ok) {
    try {
      const WeightMatrix w = build_weights(doc.graph, graph);
      report.weights_ok = true;
      std::ostringstream os;
      os << doc.graph.weight_rule << " rule, consensus gap " << w.consensus_gap;
      report.weights_detail = os.str();
    } catch (const Error& e) {
      report.weights_detail = e.what();
    }
  } else {
    report.weights_detail = "skipped (graph invalid)";
  }

  int index = 1;
  for (const auto& [signal, noise] : doc.agents) {
    AgentValidation a;
    a.agent = index++;
    try {
      const RationalTransferFunction f =
          partial_fractions(whitened_signal_transfer(signal, noise));
      a.ok = true;
      a.rho = f.rho();
      a.unit_rho = std::abs(a.rho - 1.0) < PoleZeroTolerances::unit_pole;
      std::ostringstream os;
      os << f.poles.size() << " poles, rho=" << a.rho;
      if (a.unit_rho) os << " (unit-circle dominant pole)";
      a.detail = os.str();
    } catch (const Error& e) {
      a.detail = e.what();
    }
    report.agents.push_back(std::move(a));
  }
  return report;
}

ExperimentConfig assemble_experiment(const ConfigDocument& doc) {
  ExperimentConfig config;
  config.graph = build_graph(doc.graph);
  config.weights = build_weights(doc.graph, config.graph);
  config.agents = doc.agents;
  config.gamma = doc.gamma;
  return config;
}

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001B3ULL;
  }
  std::ostringstream os;
  os << std::hex << hash;
  return os.str();
}

std::string hypothesis_name(Hypothesis h) {
  switch (h) {
    case Hypothesis::NoiseOnly: return "H0";
    case Hypothesis::SignalPlusNoise: return "H1";
    case Hypothesis::Both: return "both";
  }
  return "both";
}

Hypothesis parse_hypothesis(const std::string& name) {
  if (name == "H0" || name == "h0") return Hypothesis::NoiseOnly;
  if (name == "H1" || name == "h1") return Hypothesis::SignalPlusNoise;
  if (name == "both") return Hypothesis::Both;
  throw ParseError("unknown hypothesis '" + name + "' (expected H0, H1 or both)");
}

}  // namespace rcd
