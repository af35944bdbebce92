// Command-line front end: run one experiment, sweep a scenario parameter,
// or plot emitted CSV series as an SVG chart.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cuavsim/config.hpp"
#include "cuavsim/experiment.hpp"
#include "cuavsim/svg.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<long long> slots;
  std::optional<std::string> algo;
  std::optional<std::string> out_dir;
  std::optional<std::string> preset;
};

cuavsim::ExperimentConfig load_with_overrides(const CommonOptions& opts) {
  cuavsim::ExperimentConfig cfg = cuavsim::load_config(opts.config_path, opts.preset);
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.slots) cfg.total_slots = *opts.slots;
  if (opts.algo) {
    cuavsim::detail::ConfigEntry e{"experiment", "algorithm", *opts.algo, 0};
    cfg.algorithm = cuavsim::detail::parse_algorithm(e);
  }
  if (opts.out_dir) cfg.output_dir = *opts.out_dir;
  cfg.validate();
  return cfg;
}

void print_summary(const cuavsim::ExperimentConfig& cfg, const cuavsim::RunSummary& summary) {
  std::printf("%s %s: %d replication(s), %lld slots\n", cfg.name.c_str(),
              cuavsim::algorithm_name(cfg.algorithm), cfg.replications, cfg.total_slots);
  std::printf("  final avg reward      %.6g (std %.3g)\n", summary.mean_reward,
              summary.std_reward);
  std::printf("  final sensing acc.    %.2f%% (std %.3g)\n", summary.mean_accuracy,
              summary.std_accuracy);
  std::printf("  final channel util.   %.2f%% (std %.3g)\n", summary.mean_utilization,
              summary.std_utilization);
  std::printf("  wall seconds          %.2f\n", summary.wall_seconds);
  for (const auto& p : summary.csv_paths) std::printf("  wrote %s\n", p.c_str());
  std::printf("  wrote %s\n", summary.summary_path.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cognitive-UAV joint spectrum sensing and access simulator"};
  app.require_subcommand(1);

  CommonOptions opts;
  std::string param;
  std::string values_csv;
  std::vector<std::string> plot_inputs;
  std::string plot_out;
  std::string plot_metric = "avg_reward_ma";

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", opts.config_path, "experiment configuration file")->required();
    cmd->add_option("--seed", [&](const CLI::results_t& r) {
      opts.seed = std::stoull(r.front());
      return true;
    }, "seed override (u64)");
    cmd->add_option("--slots", [&](const CLI::results_t& r) {
      opts.slots = std::stoll(r.front());
      return true;
    }, "slot-count override");
    cmd->add_option("--algo", [&](const CLI::results_t& r) {
      opts.algo = r.front();
      return true;
    }, "algorithm override (il_q_eps|il_q_ucbh|il_ddqn_eps|il_ddqn_ucbh)");
    cmd->add_option("--out", [&](const CLI::results_t& r) {
      opts.out_dir = r.front();
      return true;
    }, "output directory override");
    cmd->add_option("--preset", [&](const CLI::results_t& r) {
      opts.preset = r.front();
      return true;
    }, "preset override (fig6|fig7|fig8|fig8_noncoop|fig12|fig13|fig14)");
  };

  CLI::App* run_cmd = app.add_subcommand("run", "run one experiment");
  add_common(run_cmd);

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run a parameter sweep");
  add_common(sweep_cmd);
  sweep_cmd->add_option("--param", param, "swept parameter (bandwidth|transition_prob)");
  sweep_cmd->add_option("--values", values_csv, "comma-separated sweep values");

  CLI::App* plot_cmd = app.add_subcommand("plot", "render CSV series as an SVG chart");
  plot_cmd->add_option("--inputs", plot_inputs, "input CSV files")->required()->expected(-1);
  plot_cmd->add_option("--out", plot_out, "output SVG path")->required();
  plot_cmd->add_option("--metric", plot_metric, "CSV column to plot");

  CLI11_PARSE(app, argc, argv);

  std::string stage = "config";
  try {
    if (run_cmd->parsed()) {
      const auto cfg = load_with_overrides(opts);
      stage = "run";
      const auto summary = cuavsim::run_experiment(cfg);
      print_summary(cfg, summary);
    } else if (sweep_cmd->parsed()) {
      const auto cfg = load_with_overrides(opts);
      std::string sweep_param = param.empty() ? cfg.sweep_param : param;
      std::vector<double> values = cfg.sweep_values;
      if (!values_csv.empty()) {
        cuavsim::detail::ConfigEntry e{"sweep", "values", values_csv, 0};
        values = cuavsim::detail::parse_double_list(e);
      }
      if (sweep_param.empty())
        throw std::invalid_argument("no sweep parameter given (--param or config sweep_param)");
      if (values.empty())
        throw std::invalid_argument("no sweep values given (--values or config sweep_values)");
      stage = "sweep";
      const auto summaries = cuavsim::run_sweep(cfg, sweep_param, values);
      for (std::size_t i = 0; i < values.size(); ++i) {
        std::printf("%s = %g: final avg reward %.6g, acc %.2f%%, util %.2f%%\n",
                    sweep_param.c_str(), values[i], summaries[i].mean_reward,
                    summaries[i].mean_accuracy, summaries[i].mean_utilization);
      }
    } else if (plot_cmd->parsed()) {
      stage = "plot";
      cuavsim::emit_plot(plot_inputs, plot_out, plot_metric);
      std::printf("wrote %s\n", plot_out.c_str());
    }
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error [%s]: %s\n", stage.c_str(), err.what());
    return 1;
  }
  return 0;
}
