#pragma once

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <thread>
#include <variant>
#include <vector>

#include "cuavsim/config.hpp"
#include "cuavsim/csv.hpp"
#include "cuavsim/ddqn.hpp"
#include "cuavsim/env.hpp"
#include "cuavsim/metrics.hpp"
#include "cuavsim/qtable.hpp"

namespace cuavsim {

// Aggregated result of one experiment (all replications).
struct RunSummary {
  std::vector<double> final_reward;       // per replication, smoothed tail value
  std::vector<double> final_accuracy;     // percent
  std::vector<double> final_utilization;  // percent
  double mean_reward = 0.0, std_reward = 0.0;
  double mean_accuracy = 0.0, std_accuracy = 0.0;
  double mean_utilization = 0.0, std_utilization = 0.0;
  double wall_seconds = 0.0;
  std::vector<std::string> csv_paths;  // one per replication
  std::string summary_path;
};

// Instantiates the per-replication network scenario. Draw order per channel:
// bandwidth choice, alpha, beta; then the gain matrices. Explicit per-channel
// overrides replace drawn values afterwards, so the stream position does not
// depend on which fields were pinned.
inline NetworkConfig build_network_config(const ExperimentConfig& cfg, Rng& scenario_rng) {
  NetworkConfig net;
  net.n_agents = cfg.n_agents;
  net.n_channels = cfg.n_channels;
  net.tau_sense = cfg.tau_sense;
  net.tau_transmit = cfg.tau_transmit;
  net.v_dd = cfg.v_dd;
  net.p_transmit = cfg.p_transmit;
  net.noise_power = cfg.noise_power;
  net.eta = cfg.eta;
  net.mu = cfg.mu;
  net.fusion_k = cfg.fusion_k;
  net.cooperative = cfg.cooperative;
  net.observation_mode = cfg.observation_mode;
  net.channels.resize(cfg.n_channels);
  for (auto& ch : net.channels) {
    ch.bandwidth =
        cfg.bandwidth_choices[scenario_rng.uniform_int(cfg.bandwidth_choices.size())];
    ch.alpha = scenario_rng.uniform(cfg.alpha_min, cfg.alpha_max);
    ch.beta = scenario_rng.uniform(cfg.beta_min, cfg.beta_max);
    ch.p_detect = cfg.p_detect;
    ch.p_false_alarm = cfg.p_false_alarm;
  }
  draw_gains(net, scenario_rng, cfg.gain_self_db_min, cfg.gain_self_db_max,
             cfg.gain_cross_db_min, cfg.gain_cross_db_max);
  for (std::size_t i = 0; i < cfg.channel_overrides.size(); ++i) {
    const auto& ov = cfg.channel_overrides[i];
    auto& ch = net.channels[i];
    if (ov.alpha) ch.alpha = *ov.alpha;
    if (ov.beta) ch.beta = *ov.beta;
    if (ov.bandwidth) ch.bandwidth = *ov.bandwidth;
    if (ov.p_detect) ch.p_detect = *ov.p_detect;
    if (ov.p_false_alarm) ch.p_false_alarm = *ov.p_false_alarm;
  }
  net.validate();
  return net;
}

namespace detail {

// The paper-facing analytic state-space size 2^M (M+1)^N, used only inside
// the confidence bonus; kept in floating point since it explodes quickly.
inline double analytic_state_space_size(int n_agents, int n_channels) {
  return std::pow(2.0, n_channels) *
         std::pow(static_cast<double>(n_channels) + 1.0, static_cast<double>(n_agents));
}

struct TabularRunnerAgent {
  SparseQTable table;
  TabularAgentConfig cfg;
  bool with_bonus;
  Rng rng;
  int n_agents;

  int act(const GlobalState& state) {
    return select_action(table, state_key(state, n_agents), cfg, rng, SelectionMode::kEpsGreedy);
  }
  void learn(const GlobalState& state, int action, double reward, const GlobalState& next,
             long long t) {
    const auto key = state_key(state, n_agents);
    const auto next_key = state_key(next, n_agents);
    if (with_bonus)
      update_q_ucbh(table, key, action, reward, next_key, t, cfg);
    else
      update_q_eps(table, key, action, reward, next_key, t, cfg);
  }
};

struct DdqnRunnerAgent {
  std::unique_ptr<DdqnAgent> agent;
  Rng rng;

  int act(const GlobalState& state) { return agent->act(state, rng); }
  void learn(const GlobalState& state, int action, double reward, const GlobalState& next,
             long long t) {
    agent->observe(state, action, reward, next);
    agent->train_step(rng);
    agent->maybe_sync_target(t);
  }
};

using RunnerAgent = std::variant<TabularRunnerAgent, DdqnRunnerAgent>;

inline RunnerAgent make_runner_agent(const ExperimentConfig& cfg, int agent_index,
                                     int replication) {
  Rng rng = Rng::derive(cfg.seed, {static_cast<std::uint64_t>(replication),
                                   kStreamAgent + static_cast<std::uint64_t>(agent_index)});
  const int n_actions = cfg.n_channels + 1;
  const double space = analytic_state_space_size(cfg.n_agents, cfg.n_channels);
  if (is_tabular(cfg.algorithm)) {
    TabularRunnerAgent a{SparseQTable(n_actions), cfg.tabular, uses_ucb(cfg.algorithm), rng,
                         cfg.n_agents};
    a.cfg.total_slots = cfg.total_slots;
    a.cfg.state_space_size = space;
    a.cfg.action_space_size = n_actions;
    // The configured bonus scale is stated in raw reward units; learning runs
    // on scaled rewards, so the bonus is scaled identically to keep the
    // update equivalent to the raw-unit run.
    a.cfg.ucb_c = cfg.tabular.ucb_c * cfg.reward_scale;
    a.cfg.validate();
    return a;
  }
  DdqnConfig dcfg = cfg.ddqn;
  dcfg.exploration_mode =
      uses_ucb(cfg.algorithm) ? ExplorationMode::kUcbH : ExplorationMode::kEpsGreedy;
  dcfg.total_slots = cfg.total_slots;
  dcfg.state_space_size = space;
  dcfg.action_space_size = n_actions;
  dcfg.ucb_c = cfg.ddqn.ucb_c * cfg.reward_scale;
  DdqnRunnerAgent a{nullptr, rng};
  a.agent = std::make_unique<DdqnAgent>(2 * cfg.n_channels + 1, n_actions, dcfg, a.rng);
  return a;
}

struct ReplicationResult {
  double final_reward = 0.0;
  double final_accuracy = 0.0;
  double final_utilization = 0.0;
  std::string csv_path;
};

inline std::string replication_csv_path(const ExperimentConfig& cfg, int replication) {
  std::filesystem::path dir(cfg.output_dir);
  return (dir / (cfg.name + "_" + algorithm_name(cfg.algorithm) + "_rep" +
                 std::to_string(replication) + ".csv"))
      .string();
}

inline ReplicationResult run_replication(const ExperimentConfig& cfg, int replication) {
  Rng scenario_rng =
      Rng::derive(cfg.seed, {static_cast<std::uint64_t>(replication), kStreamScenario});
  const NetworkConfig net = build_network_config(cfg, scenario_rng);
  Rng env_rng = Rng::derive(cfg.seed, {static_cast<std::uint64_t>(replication), kStreamEnv});
  Environment env(net, env_rng);

  std::vector<RunnerAgent> agents;
  agents.reserve(cfg.n_agents);
  for (int n = 0; n < cfg.n_agents; ++n) agents.push_back(make_runner_agent(cfg, n, replication));

  std::vector<SlotMetrics> series;
  series.reserve(cfg.total_slots);
  JointAction joint;
  joint.actions.resize(cfg.n_agents);
  for (long long t = 0; t < cfg.total_slots; ++t) {
    const GlobalState state = env.state();
    for (int n = 0; n < cfg.n_agents; ++n)
      joint.actions[n] = std::visit([&](auto& a) { return a.act(state); }, agents[n]);
    const SlotOutcome outcome = env.step(joint);
    for (int n = 0; n < cfg.n_agents; ++n) {
      const double scaled = outcome.rewards[n] * cfg.reward_scale;
      std::visit([&](auto& a) { a.learn(state, joint.actions[n], scaled, outcome.next_state, t); },
                 agents[n]);
    }
    SlotMetrics m;
    m.slot = t;
    m.avg_reward = average_reward(outcome.rewards);
    m.sensing_accuracy = sensing_accuracy(outcome, cfg.n_channels);
    m.channel_utilization = channel_utilization(joint, cfg.n_channels);
    series.push_back(m);
  }

  ReplicationResult result;
  result.csv_path = replication_csv_path(cfg, replication);
  write_csv(series, cfg.smoothing_window, result.csv_path);

  auto tail_of = [&](auto proj) {
    std::vector<double> values;
    values.reserve(series.size());
    for (const auto& s : series) values.push_back(proj(s));
    return moving_average(values, cfg.smoothing_window).back();
  };
  result.final_reward = tail_of([](const SlotMetrics& s) { return s.avg_reward; });
  result.final_accuracy = tail_of([](const SlotMetrics& s) { return s.sensing_accuracy; });
  result.final_utilization = tail_of([](const SlotMetrics& s) { return s.channel_utilization; });
  return result;
}

inline int replication_thread_cap() {
  if (const char* env = std::getenv("CUAV_SIM_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) return cap;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

inline void mean_std(const std::vector<double>& values, double& mean, double& sd) {
  mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  sd = 0.0;
  if (values.size() > 1) {
    for (double v : values) sd += (v - mean) * (v - mean);
    sd = std::sqrt(sd / static_cast<double>(values.size() - 1));
  }
}

}  // namespace detail

// Runs every replication of the experiment (possibly in parallel; the
// CUAV_SIM_THREADS environment variable caps the worker count), writes one
// CSV per replication plus a summary file, and aggregates the tail metrics.
// Outputs depend only on (config, seed), never on the thread schedule.
inline RunSummary run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto t_start = std::chrono::steady_clock::now();
  std::filesystem::create_directories(cfg.output_dir);

  std::vector<detail::ReplicationResult> results(cfg.replications);
  const int n_threads = std::min(cfg.replications, detail::replication_thread_cap());
  if (n_threads <= 1) {
    for (int r = 0; r < cfg.replications; ++r) results[r] = detail::run_replication(cfg, r);
  } else {
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
      for (int r = next.fetch_add(1); r < cfg.replications; r = next.fetch_add(1)) {
        try {
          results[r] = detail::run_replication(cfg, r);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
  }

  RunSummary summary;
  for (const auto& r : results) {
    summary.final_reward.push_back(r.final_reward);
    summary.final_accuracy.push_back(r.final_accuracy);
    summary.final_utilization.push_back(r.final_utilization);
    summary.csv_paths.push_back(r.csv_path);
  }
  detail::mean_std(summary.final_reward, summary.mean_reward, summary.std_reward);
  detail::mean_std(summary.final_accuracy, summary.mean_accuracy, summary.std_accuracy);
  detail::mean_std(summary.final_utilization, summary.mean_utilization, summary.std_utilization);
  summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

  std::filesystem::path dir(cfg.output_dir);
  summary.summary_path =
      (dir / (cfg.name + "_" + algorithm_name(cfg.algorithm) + "_summary.txt")).string();
  std::ofstream os(summary.summary_path, std::ios::binary);
  if (!os) throw std::runtime_error("run_experiment: cannot open " + summary.summary_path);
  os.precision(10);
  os << "name " << cfg.name << "\nalgorithm " << algorithm_name(cfg.algorithm) << "\nseed "
     << cfg.seed << "\ntotal_slots " << cfg.total_slots << "\nreplications " << cfg.replications
     << "\n";
  os << "rep,final_avg_reward,final_sensing_accuracy,final_channel_utilization\n";
  for (int r = 0; r < cfg.replications; ++r)
    os << r << ',' << summary.final_reward[r] << ',' << summary.final_accuracy[r] << ','
       << summary.final_utilization[r] << '\n';
  os << "mean," << summary.mean_reward << ',' << summary.mean_accuracy << ','
     << summary.mean_utilization << '\n';
  os << "std," << summary.std_reward << ',' << summary.std_accuracy << ','
     << summary.std_utilization << '\n';
  os << "wall_seconds " << summary.wall_seconds << '\n';
  return summary;
}

namespace detail {

inline std::string sweep_value_tag(double value) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%g", value);
  std::string tag(buf);
  for (auto& c : tag) {
    if (c == '.') c = 'p';
    if (c == '+') c = '_';
    if (c == '-') c = 'm';
  }
  return tag;
}

}  // namespace detail

// Applies one sweep point to a base configuration. Bandwidth sweeps pin all
// channels to the swept value; transition sweeps set alpha = beta = value.
inline ExperimentConfig apply_sweep_value(const ExperimentConfig& base, const std::string& param,
                                          double value) {
  ExperimentConfig cfg = base;
  if (param == "bandwidth") {
    cfg.bandwidth_choices = {value};
  } else if (param == "transition_prob") {
    cfg.alpha_min = cfg.alpha_max = value;
    cfg.beta_min = cfg.beta_max = value;
  } else {
    throw std::invalid_argument("run_sweep: unknown parameter '" + param + "'");
  }
  cfg.name = base.name + "_" + param + "_" + detail::sweep_value_tag(value);
  return cfg;
}

// One experiment per value with identical seeds across values. Emits the
// per-value summaries plus a sweep CSV next to the per-run outputs.
inline std::vector<RunSummary> run_sweep(const ExperimentConfig& base, const std::string& param,
                                         const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("run_sweep: values must be nonempty");
  std::vector<RunSummary> summaries;
  summaries.reserve(values.size());
  for (double v : values) summaries.push_back(run_experiment(apply_sweep_value(base, param, v)));

  std::filesystem::create_directories(base.output_dir);
  const auto path =
      (std::filesystem::path(base.output_dir) / (base.name + "_sweep_" + param + ".csv")).string();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("run_sweep: cannot open " + path);
  os << "value,mean_final_reward,std_final_reward,mean_final_accuracy,mean_final_utilization\n";
  char line[256];
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::snprintf(line, sizeof(line), "%.6g,%.6f,%.6f,%.6f,%.6f\n", values[i],
                  summaries[i].mean_reward, summaries[i].std_reward, summaries[i].mean_accuracy,
                  summaries[i].mean_utilization);
    os << line;
  }
  return summaries;
}

}  // namespace cuavsim
