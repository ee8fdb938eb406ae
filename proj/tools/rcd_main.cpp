// Command-line front end: validate configs, compute the closed-form
// asymptotic report, run seeded Monte Carlo experiments, plot curves.
//
// Exit codes: 0 success, 2 validation/config failure, 3 runtime failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rcd/analysis.hpp"
#include "rcd/errors.hpp"
#include "rcd/montecarlo.hpp"
#include "rcd/serde.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw rcd::ParseError(path + ": cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string iso_timestamp(std::chrono::system_clock::time_point tp) {
  const std::time_t t = std::chrono::system_clock::to_time_t(tp);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

void print_validation(const rcd::ValidationReport& report) {
  std::cout << "graph: " << (report.graph_ok ? "OK" : "FAIL") << " ("
            << report.graph_detail << ")\n";
  std::cout << "weights: " << (report.weights_ok ? "OK" : "FAIL") << " ("
            << report.weights_detail << ")\n";
  int failures = 0;
  for (const auto& a : report.agents) {
    std::cout << "agent " << a.agent << ": " << (a.ok ? "OK" : "FAIL") << " ("
              << a.detail << ")\n";
    if (!a.ok) ++failures;
  }
  if (report.all_ok()) {
    std::cout << "validation: OK (" << report.agents.size() << " agents)\n";
  } else {
    std::cout << "validation: FAIL";
    if (failures > 0)
      std::cout << " (" << failures << " of " << report.agents.size() << " agents)";
    std::cout << "\n";
  }
}

struct SimulateOptions {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int trials = -1;
  int horizon = -1;
  int stride = -1;
  int workers = 0;
  std::string hypothesis;
  double gamma = 0.0;
  bool gamma_set = false;
  std::vector<int> mute;  // 1-based
  bool trace = false;
};

int run_simulate(const SimulateOptions& opt) {
  const std::string config_bytes = read_file(opt.config_path);
  const rcd::ConfigDocument doc =
      rcd::parse_config_text(config_bytes, opt.config_path);

  const rcd::ValidationReport report = rcd::validate_document(doc);
  if (!report.all_ok()) {
    print_validation(report);
    return kExitValidation;
  }

  rcd::ExperimentConfig config = rcd::assemble_experiment(doc);
  if (opt.seed_set) config.seed = opt.seed;
  if (opt.trials > 0) config.trials = opt.trials;
  if (opt.horizon > 0) config.horizon = opt.horizon;
  if (opt.stride > 0) config.record_stride = opt.stride;
  if (opt.gamma_set) config.gamma = opt.gamma;
  if (!opt.hypothesis.empty()) config.hypothesis = rcd::parse_hypothesis(opt.hypothesis);
  config.workers = opt.workers;
  config.record_trace = opt.trace;
  for (int id : opt.mute) {
    if (id < 1 || id > config.num_agents())
      throw rcd::ArgumentError("--mute: agent id out of range");
    config.zero_signal_agents.push_back(id - 1);
  }

  namespace fs = std::filesystem;
  fs::create_directories(opt.out_dir);
  const fs::path curves_path = fs::path(opt.out_dir) / "curves.csv";
  const fs::path manifest_path = fs::path(opt.out_dir) / "manifest.json";
  const fs::path trace_path = fs::path(opt.out_dir) / "trace.csv";
  const fs::path graph_path = fs::path(opt.out_dir) / "graph.json";
  std::vector<fs::path> written;

  const auto started = std::chrono::system_clock::now();
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const rcd::ErrorCurves curves = rcd::run_experiment(config);

    {
      std::ofstream out(curves_path, std::ios::binary);
      if (!out) throw rcd::Error("cannot write " + curves_path.string());
      rcd::write_curves_csv(out, curves);
      written.push_back(curves_path);
    }

    if (config.record_trace) {
      std::ofstream out(trace_path, std::ios::binary);
      if (!out) throw rcd::Error("cannot write " + trace_path.string());
      out << "k,agent,l,D\n";
      out.precision(10);
      for (const auto& row : curves.trace)
        out << row.k << ',' << (row.agent + 1) << ',' << row.statistic << ','
            << row.decision << '\n';
      written.push_back(trace_path);
    }

    {
      // The realized graph and weights, so seeded samples can be audited.
      nlohmann::json snapshot{{"graph", rcd::graph_to_json(config.graph)},
                              {"weights", rcd::weights_to_json(config.weights)}};
      std::ofstream out(graph_path, std::ios::binary);
      if (!out) throw rcd::Error("cannot write " + graph_path.string());
      out << snapshot.dump(2) << '\n';
      written.push_back(graph_path);
    }

    // Exact finite-horizon Gaussian predictions at the last recorded step.
    const rcd::MomentTrace moments =
        rcd::moment_trace(config.agents, config.weights, config.horizon, false,
                          config.zero_signal_agents);
    const int last = static_cast<int>(curves.recorded_steps.size()) - 1;
    const int k_final = curves.recorded_steps[static_cast<std::size_t>(last)];
    double max_gap = 0.0;
    for (int i = 0; i < config.num_agents(); ++i) {
      const double mu = moments.mean[static_cast<std::size_t>(k_final)](i);
      const double sd =
          std::sqrt(moments.variance[static_cast<std::size_t>(k_final)](i));
      if (curves.has_false_alarm()) {
        const double predicted = rcd::q_function((config.gamma + mu) / sd);
        max_gap = std::max(max_gap,
                           std::abs(curves.p_false_alarm(last, i) - predicted));
      }
      if (curves.has_miss()) {
        const double predicted = rcd::q_function((mu - config.gamma) / sd);
        max_gap = std::max(max_gap, std::abs(curves.p_miss(last, i) - predicted));
      }
    }

    const auto finished = std::chrono::system_clock::now();
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    nlohmann::json manifest{
        {"config", opt.config_path},
        {"config_hash", rcd::fnv1a64_hex(config_bytes)},
        {"seed", config.seed},
        {"version", kVersion},
        {"started_at", iso_timestamp(started)},
        {"finished_at", iso_timestamp(finished)},
        {"wall_seconds", wall},
        {"trials", config.trials},
        {"horizon", config.horizon},
        {"stride", config.record_stride},
        {"gamma", config.gamma},
        {"hypothesis", rcd::hypothesis_name(config.hypothesis)},
        {"workers", config.workers},
        {"muted_agents", opt.mute},
        {"outputs", nlohmann::json::array()},
    };
    for (const auto& p : written) manifest["outputs"].push_back(p.string());
    manifest["outputs"].push_back(manifest_path.string());
    {
      std::ofstream out(manifest_path, std::ios::binary);
      if (!out) throw rcd::Error("cannot write " + manifest_path.string());
      out << manifest.dump(2) << '\n';
      written.push_back(manifest_path);
    }

    std::cout << "wrote " << curves_path.string() << " (" << config.trials
              << " trials, horizon " << config.horizon << ")\n";
    std::cout << "max |empirical - predicted| at k=" << k_final << ": " << max_gap
              << "\n";
    return 0;
  } catch (...) {
    std::error_code ec;
    for (const auto& p : written) fs::remove(p, ec);
    fs::remove(curves_path, ec);
    fs::remove(manifest_path, ec);
    fs::remove(trace_path, ec);
    fs::remove(graph_path, ec);
    throw;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"running consensus detection of ARMA signals in colored noise"};
  app.require_subcommand(1);

  std::string validate_config;
  CLI::App* cmd_validate =
      app.add_subcommand("validate", "check a config against the model assumptions");
  cmd_validate->add_option("config", validate_config, "config JSON path")->required();

  std::string analyze_config, analyze_out;
  double analyze_gamma = 0.0;
  bool analyze_gamma_set = false;
  CLI::App* cmd_analyze = app.add_subcommand(
      "analyze", "closed-form asymptotics: regime, alpha, rates, floors");
  cmd_analyze->add_option("config", analyze_config, "config JSON path")->required();
  cmd_analyze->add_option("--out", analyze_out, "write the JSON report here");
  cmd_analyze->add_option("--gamma", analyze_gamma, "threshold override");

  SimulateOptions sim;
  CLI::App* cmd_simulate =
      app.add_subcommand("simulate", "seeded Monte Carlo error-probability run");
  cmd_simulate->add_option("config", sim.config_path, "config JSON path")->required();
  cmd_simulate->add_option("--seed", sim.seed, "base RNG seed");
  cmd_simulate->add_option("--trials", sim.trials, "Monte Carlo trials");
  cmd_simulate->add_option("--horizon", sim.horizon, "number of steps K");
  cmd_simulate->add_option("--stride", sim.stride, "recording stride");
  cmd_simulate->add_option("--workers", sim.workers, "worker threads (0 = all)");
  cmd_simulate->add_option("--hypothesis", sim.hypothesis, "H0, H1 or both");
  cmd_simulate->add_option("--gamma", sim.gamma, "threshold override");
  cmd_simulate->add_option("--out", sim.out_dir, "output directory");
  cmd_simulate->add_option("--mute", sim.mute, "agent ids whose innovations are zeroed");
  cmd_simulate->add_flag("--trace", sim.trace, "record per-step (k, agent, l, D) of trial 0");

  std::string plot_curves, plot_out = "curves.png", plot_script;
  CLI::App* cmd_plot = app.add_subcommand("plot", "render curves.csv via the bundled script");
  cmd_plot->add_option("--curves", plot_curves, "curves.csv path")->required();
  cmd_plot->add_option("--out", plot_out, "output image path");
  cmd_plot->add_option("--script", plot_script, "plotting script path");

  CLI11_PARSE(app, argc, argv);

  sim.seed_set = cmd_simulate->count("--seed") > 0;
  sim.gamma_set = cmd_simulate->count("--gamma") > 0;
  analyze_gamma_set = cmd_analyze->count("--gamma") > 0;

  try {
    if (cmd_validate->parsed()) {
      const rcd::ConfigDocument doc = rcd::load_config_file(validate_config);
      const rcd::ValidationReport report = rcd::validate_document(doc);
      print_validation(report);
      return report.all_ok() ? 0 : kExitValidation;
    }

    if (cmd_analyze->parsed()) {
      const rcd::ConfigDocument doc = rcd::load_config_file(analyze_config);
      const rcd::ValidationReport vreport = rcd::validate_document(doc);
      if (!vreport.all_ok()) {
        print_validation(vreport);
        return kExitValidation;
      }
      const double gamma = analyze_gamma_set ? analyze_gamma : doc.gamma;
      const rcd::SpectralSummary summary = rcd::SpectralSummary::from_agents(doc.agents);
      const rcd::AsymptoticReport report =
          rcd::classify(summary, static_cast<int>(doc.agents.size()), gamma);
      nlohmann::json out = rcd::report_to_json(report);
      out["rho_per_agent"] = summary.rho_per_agent;
      const std::string text = out.dump(2) + "\n";
      if (analyze_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream file(analyze_out, std::ios::binary);
        if (!file) throw rcd::Error("cannot write " + analyze_out);
        file << text;
      }
      return 0;
    }

    if (cmd_simulate->parsed()) return run_simulate(sim);

    if (cmd_plot->parsed()) {
      std::string script = plot_script;
      if (script.empty()) {
        namespace fs = std::filesystem;
        const fs::path beside_source = fs::path(__FILE__).parent_path() / "plot_curves.py";
        script = fs::exists(beside_source) ? beside_source.string() : "tools/plot_curves.py";
      }
      const std::string command =
          "python3 " + script + " " + plot_curves + " " + plot_out;
      const int status = std::system(command.c_str());
      if (status != 0) {
        std::cerr << "plot command failed: " << command << "\n";
        return kExitRuntime;
      }
      std::cout << "wrote " << plot_out << "\n";
      return 0;
    }
  } catch (const rcd::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const rcd::AssumptionViolation& e) {
    std::cerr << "assumption violation: " << e.what() << "\n";
    return kExitValidation;
  } catch (const rcd::GenerationError& e) {
    std::cerr << "generation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const rcd::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
