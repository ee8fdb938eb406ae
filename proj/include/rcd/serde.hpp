#ifndef RCD_SERDE_HPP
#define RCD_SERDE_HPP

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rcd/analysis.hpp"
#include "rcd/montecarlo.hpp"
#include "rcd/network.hpp"

namespace rcd {

/// How to build the communication graph. `edges` (1-based node ids in JSON)
/// only applies to type "explicit".
struct GraphSpec {
  std::string type = "erdos_renyi";  // erdos_renyi | path | complete | star | explicit
  int n = 0;
  double p = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::pair<int, int>> edges;
  std::string weight_rule = "laplacian";  // laplacian | metropolis
};

/// Parsed config file: {version, graph, gamma, agents:[{signal, noise}]}.
struct ConfigDocument {
  int version = 1;
  GraphSpec graph;
  double gamma = 0.0;
  std::vector<std::pair<ArmaModel, ArmaModel>> agents;  // (signal, noise)
};

ConfigDocument parse_config_text(const std::string& text, const std::string& origin);
ConfigDocument load_config_file(const std::string& path);
nlohmann::json config_to_json(const ConfigDocument& doc);

nlohmann::json arma_to_json(const ArmaModel& model);
ArmaModel arma_from_json(const nlohmann::json& j, const std::string& context);

Graph build_graph(const GraphSpec& spec);
WeightMatrix build_weights(const GraphSpec& spec, const Graph& graph);

nlohmann::json graph_to_json(const Graph& graph);          // 1-based edge list
nlohmann::json weights_to_json(const WeightMatrix& w);     // dense rows
nlohmann::json report_to_json(const AsymptoticReport& r);  // 1-based agent ids

/// Per-agent and network-level assumption checks, collected rather than
/// thrown, for the `validate` command.
struct AgentValidation {
  int agent = 0;  // 1-based
  bool ok = false;
  double rho = 0.0;
  bool unit_rho = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<AgentValidation> agents;
  bool graph_ok = false;
  std::string graph_detail;
  bool weights_ok = false;
  std::string weights_detail;

  bool all_ok() const;
};

ValidationReport validate_document(const ConfigDocument& doc);

/// Builds the runnable experiment (graph + weights + models); run parameters
/// (trials, horizon, seed, ...) keep their defaults for the caller to fill.
ExperimentConfig assemble_experiment(const ConfigDocument& doc);

std::string fnv1a64_hex(std::string_view bytes);

std::string hypothesis_name(Hypothesis h);
Hypothesis parse_hypothesis(const std::string& name);

}  // namespace rcd

#endif  // RCD_SERDE_HPP
