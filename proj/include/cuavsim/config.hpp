#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cuavsim/ddqn.hpp"
#include "cuavsim/network.hpp"
#include "cuavsim/qtable.hpp"

namespace cuavsim {

enum class Algorithm { kIlQEps, kIlQUcbh, kIlDdqnEps, kIlDdqnUcbh };

inline const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kIlQEps: return "il_q_eps";
    case Algorithm::kIlQUcbh: return "il_q_ucbh";
    case Algorithm::kIlDdqnEps: return "il_ddqn_eps";
    case Algorithm::kIlDdqnUcbh: return "il_ddqn_ucbh";
  }
  return "?";
}

inline bool is_tabular(Algorithm a) {
  return a == Algorithm::kIlQEps || a == Algorithm::kIlQUcbh;
}

inline bool uses_ucb(Algorithm a) {
  return a == Algorithm::kIlQUcbh || a == Algorithm::kIlDdqnUcbh;
}

// Per-channel field overrides applied after the scenario draw.
struct ChannelOverride {
  std::optional<double> alpha, beta, bandwidth, p_detect, p_false_alarm;
};

// Full description of one experiment: scenario-generation controls, the
// learner hyperparameters, and the run bookkeeping. Scenario quantities that
// the configuration leaves open (per-channel transition pairs, bandwidths,
// gains) are drawn from the replication's scenario stream at run time.
struct ExperimentConfig {
  std::string name = "run";  // output file prefix
  std::string preset;
  Algorithm algorithm = Algorithm::kIlQUcbh;
  long long total_slots = 50000;
  std::uint64_t seed = 1;
  int replications = 1;
  std::string output_dir = "out";
  int smoothing_window = 100;
  double reward_scale = 1e-5;  // applied to rewards before learning only

  // network scenario
  int n_agents = 4;
  int n_channels = 5;
  bool cooperative = true;
  ObservationMode observation_mode = ObservationMode::kGroundTruth;
  int fusion_k = 0;  // 0 = per-slot majority
  double tau_sense = 1e-4;
  double tau_transmit = 5e-4;
  double v_dd = 1.0;
  double p_transmit = 0.2;
  double noise_power = -1.0;  // < 0: thermal floor scaled by bandwidth
  double eta = 0.01;
  double mu = 0.05;
  double gain_self_db_min = -80.0, gain_self_db_max = -60.0;
  double gain_cross_db_min = -90.0, gain_cross_db_max = -70.0;
  double alpha_min = 0.1, alpha_max = 0.9;
  double beta_min = 0.1, beta_max = 0.9;
  std::vector<double> bandwidth_choices = {50e6, 60e6, 70e6, 80e6, 90e6, 100e6};
  double p_detect = 0.9;
  double p_false_alarm = 0.1;
  std::vector<ChannelOverride> channel_overrides;  // sized n_channels when used

  TabularAgentConfig tabular;
  DdqnConfig ddqn;

  // optional sweep definition (used by the sweep command)
  std::string sweep_param;  // "bandwidth" or "transition_prob"
  std::vector<double> sweep_values;

  void validate() const {
    if (total_slots < 1) throw std::invalid_argument("experiment.total_slots must be >= 1");
    if (replications < 1) throw std::invalid_argument("experiment.replications must be >= 1");
    if (smoothing_window < 1)
      throw std::invalid_argument("experiment.smoothing_window must be >= 1");
    if (!(reward_scale > 0.0)) throw std::invalid_argument("experiment.reward_scale must be > 0");
    if (n_agents < 1) throw std::invalid_argument("network.n_agents must be >= 1");
    if (n_channels < 1) throw std::invalid_argument("network.n_channels must be >= 1");
    if (fusion_k < 0 || fusion_k > n_agents)
      throw std::invalid_argument("network.fusion_k must be in [1, n_agents] (or majority)");
    if (!(tau_sense > 0.0)) throw std::invalid_argument("network.tau_sense must be > 0");
    if (!(tau_transmit > 0.0)) throw std::invalid_argument("network.tau_transmit must be > 0");
    if (!(p_transmit > 0.0)) throw std::invalid_argument("network.p_transmit must be > 0");
    if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("network.eta must be in (0,1)");
    if (!(mu > 0.0 && mu < 1.0)) throw std::invalid_argument("network.mu must be in (0,1)");
    if (!(eta + mu < 1.0))
      throw std::invalid_argument("network.eta + network.mu must be < 1");
    auto check_prob_range = [](double lo, double hi, const char* what) {
      if (!(lo >= 0.0 && hi <= 1.0 && lo <= hi))
        throw std::invalid_argument(std::string(what) + " range invalid");
    };
    check_prob_range(alpha_min, alpha_max, "network.alpha");
    check_prob_range(beta_min, beta_max, "network.beta");
    if (!(p_detect >= 0.0 && p_detect <= 1.0))
      throw std::invalid_argument("network.p_detect must be in [0,1]");
    if (!(p_false_alarm >= 0.0 && p_false_alarm <= 1.0))
      throw std::invalid_argument("network.p_false_alarm must be in [0,1]");
    if (bandwidth_choices.empty())
      throw std::invalid_argument("network.bandwidth_choices must be nonempty");
    for (double b : bandwidth_choices)
      if (!(b > 0.0)) throw std::invalid_argument("network.bandwidth_choices must be > 0");
    if (!sweep_param.empty() && sweep_param != "bandwidth" && sweep_param != "transition_prob")
      throw std::invalid_argument("experiment.sweep_param must be bandwidth or transition_prob");
  }
};

// --- presets -----------------------------------------------------------

// Named scenario bundles covering the stock experiments. All share the
// default radio and learner parameters; they differ in population size,
// cooperation mode, and the optional sweep definition.
inline ExperimentConfig make_preset(const std::string& preset) {
  ExperimentConfig cfg;
  cfg.preset = preset;
  cfg.name = preset;
  cfg.replications = 5;
  if (preset == "fig6") {
    cfg.n_agents = 4;
  } else if (preset == "fig7") {
    cfg.n_agents = 6;
  } else if (preset == "fig8" || preset == "fig12") {
    cfg.n_agents = 10;
  } else if (preset == "fig8_noncoop") {
    cfg.n_agents = 10;
    cfg.cooperative = false;
  } else if (preset == "fig13") {
    cfg.n_agents = 4;
    cfg.sweep_param = "bandwidth";
    cfg.sweep_values = {50e6, 60e6, 70e6, 80e6, 90e6, 100e6};
  } else if (preset == "fig14") {
    cfg.n_agents = 4;
    cfg.sweep_param = "transition_prob";
    cfg.sweep_values = {0.1, 0.3, 0.5, 0.7, 0.9};
  } else {
    throw std::invalid_argument("unknown preset: " + preset);
  }
  return cfg;
}

// --- config file parsing ------------------------------------------------

namespace detail {

inline std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

struct ConfigEntry {
  std::string section;
  std::string key;
  std::string value;
  int line = 0;
};

inline std::vector<ConfigEntry> parse_entries(std::istream& is) {
  std::vector<ConfigEntry> entries;
  std::string section = "experiment";
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("config line " + std::to_string(line_no) +
                                    ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected key = value");
    ConfigEntry e;
    e.section = section;
    e.key = trim(line.substr(0, eq));
    e.value = trim(line.substr(eq + 1));
    e.line = line_no;
    if (e.key.empty())
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty key");
    entries.push_back(std::move(e));
  }
  return entries;
}

inline double parse_double(const ConfigEntry& e) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(e.section + "." + e.key + ": not a number: '" + e.value + "'");
  }
}

inline long long parse_int(const ConfigEntry& e) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(e.section + "." + e.key + ": not an integer: '" + e.value + "'");
  }
}

inline std::uint64_t parse_u64(const ConfigEntry& e) {
  try {
    std::size_t pos = 0;
    const std::uint64_t v = std::stoull(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(e.section + "." + e.key + ": not an unsigned integer: '" +
                                e.value + "'");
  }
}

inline bool parse_bool(const ConfigEntry& e) {
  if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
  if (e.value == "false" || e.value == "0" || e.value == "no") return false;
  throw std::invalid_argument(e.section + "." + e.key + ": not a boolean: '" + e.value + "'");
}

inline std::vector<double> parse_double_list(const ConfigEntry& e) {
  std::vector<double> values;
  std::stringstream ss(e.value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    ConfigEntry tmp = e;
    tmp.value = item;
    values.push_back(parse_double(tmp));
  }
  if (values.empty())
    throw std::invalid_argument(e.section + "." + e.key + ": empty list");
  return values;
}

inline Algorithm parse_algorithm(const ConfigEntry& e) {
  if (e.value == "il_q_eps") return Algorithm::kIlQEps;
  if (e.value == "il_q_ucbh") return Algorithm::kIlQUcbh;
  if (e.value == "il_ddqn_eps") return Algorithm::kIlDdqnEps;
  if (e.value == "il_ddqn_ucbh") return Algorithm::kIlDdqnUcbh;
  throw std::invalid_argument(e.section + "." + e.key + ": unknown algorithm '" + e.value + "'");
}

inline void apply_entry(ExperimentConfig& cfg, const ConfigEntry& e) {
  const std::string& s = e.section;
  const std::string& k = e.key;
  auto unknown = [&]() {
    throw std::invalid_argument("unknown config key: " + s + "." + k);
  };

  if (s == "experiment") {
    if (k == "preset") return;  // consumed before entry application
    else if (k == "name") cfg.name = e.value;
    else if (k == "algorithm") cfg.algorithm = parse_algorithm(e);
    else if (k == "total_slots") cfg.total_slots = parse_int(e);
    else if (k == "seed") cfg.seed = parse_u64(e);
    else if (k == "replications") cfg.replications = static_cast<int>(parse_int(e));
    else if (k == "output_dir") cfg.output_dir = e.value;
    else if (k == "smoothing_window") cfg.smoothing_window = static_cast<int>(parse_int(e));
    else if (k == "reward_scale") cfg.reward_scale = parse_double(e);
    else if (k == "sweep_param") cfg.sweep_param = e.value;
    else if (k == "sweep_values") cfg.sweep_values = parse_double_list(e);
    else unknown();
  } else if (s == "network") {
    if (k == "n_agents") cfg.n_agents = static_cast<int>(parse_int(e));
    else if (k == "n_channels") cfg.n_channels = static_cast<int>(parse_int(e));
    else if (k == "cooperative") cfg.cooperative = parse_bool(e);
    else if (k == "observation_mode") {
      if (e.value == "ground_truth") cfg.observation_mode = ObservationMode::kGroundTruth;
      else if (e.value == "fusion_carry_forward")
        cfg.observation_mode = ObservationMode::kFusionCarryForward;
      else
        throw std::invalid_argument("network.observation_mode: unknown mode '" + e.value + "'");
    }
    else if (k == "fusion_k") cfg.fusion_k = e.value == "majority" ? 0 : static_cast<int>(parse_int(e));
    else if (k == "tau_sense") cfg.tau_sense = parse_double(e);
    else if (k == "tau_transmit") cfg.tau_transmit = parse_double(e);
    else if (k == "v_dd") cfg.v_dd = parse_double(e);
    else if (k == "p_transmit") cfg.p_transmit = parse_double(e);
    else if (k == "noise_power") cfg.noise_power = e.value == "thermal" ? -1.0 : parse_double(e);
    else if (k == "eta") cfg.eta = parse_double(e);
    else if (k == "mu") cfg.mu = parse_double(e);
    else if (k == "gain_self_db_min") cfg.gain_self_db_min = parse_double(e);
    else if (k == "gain_self_db_max") cfg.gain_self_db_max = parse_double(e);
    else if (k == "gain_cross_db_min") cfg.gain_cross_db_min = parse_double(e);
    else if (k == "gain_cross_db_max") cfg.gain_cross_db_max = parse_double(e);
    else if (k == "alpha_min") cfg.alpha_min = parse_double(e);
    else if (k == "alpha_max") cfg.alpha_max = parse_double(e);
    else if (k == "beta_min") cfg.beta_min = parse_double(e);
    else if (k == "beta_max") cfg.beta_max = parse_double(e);
    else if (k == "bandwidth_choices") cfg.bandwidth_choices = parse_double_list(e);
    else if (k == "p_detect") cfg.p_detect = parse_double(e);
    else if (k == "p_false_alarm") cfg.p_false_alarm = parse_double(e);
    else unknown();
  } else if (s.rfind("channel", 0) == 0) {
    const std::string index_text = trim(s.substr(7));
    int index = 0;
    try {
      index = std::stoi(index_text);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad channel section header: [" + s + "]");
    }
    if (index < 1 || index > cfg.n_channels)
      throw std::invalid_argument("[" + s + "]: channel index out of range (declare "
                                  "network.n_channels first)");
    if (cfg.channel_overrides.size() < static_cast<std::size_t>(cfg.n_channels))
      cfg.channel_overrides.resize(cfg.n_channels);
    auto& ch = cfg.channel_overrides[index - 1];
    if (k == "alpha") ch.alpha = parse_double(e);
    else if (k == "beta") ch.beta = parse_double(e);
    else if (k == "bandwidth") ch.bandwidth = parse_double(e);
    else if (k == "p_detect") ch.p_detect = parse_double(e);
    else if (k == "p_false_alarm") ch.p_false_alarm = parse_double(e);
    else unknown();
  } else if (s == "tabular") {
    if (k == "gamma") cfg.tabular.gamma = parse_double(e);
    else if (k == "epsilon") cfg.tabular.epsilon = parse_double(e);
    else if (k == "c_alpha") cfg.tabular.c_alpha = parse_double(e);
    else if (k == "phi_alpha") cfg.tabular.phi_alpha = parse_double(e);
    else if (k == "alpha0") cfg.tabular.alpha0 = parse_double(e);
    else if (k == "ucb_c") cfg.tabular.ucb_c = parse_double(e);
    else if (k == "ucb_p") cfg.tabular.ucb_p = parse_double(e);
    else if (k == "horizon_h") cfg.tabular.horizon_h = static_cast<int>(parse_int(e));
    else unknown();
  } else if (s == "ddqn") {
    if (k == "gamma") cfg.ddqn.gamma = parse_double(e);
    else if (k == "epsilon") cfg.ddqn.epsilon = parse_double(e);
    else if (k == "batch") cfg.ddqn.batch = static_cast<int>(parse_int(e));
    else if (k == "sync_period") cfg.ddqn.sync_period = static_cast<int>(parse_int(e));
    else if (k == "capacity") cfg.ddqn.capacity = static_cast<int>(parse_int(e));
    else if (k == "zeta") cfg.ddqn.zeta = parse_double(e);
    else if (k == "train_start") cfg.ddqn.train_start = static_cast<int>(parse_int(e));
    else if (k == "hidden") {
      cfg.ddqn.hidden.clear();
      for (double h : parse_double_list(e)) cfg.ddqn.hidden.push_back(static_cast<int>(h));
    }
    else if (k == "ucb_c") cfg.ddqn.ucb_c = parse_double(e);
    else if (k == "ucb_p") cfg.ddqn.ucb_p = parse_double(e);
    else if (k == "horizon_h") cfg.ddqn.horizon_h = static_cast<int>(parse_int(e));
    else unknown();
  } else {
    throw std::invalid_argument("unknown config section: [" + s + "]");
  }
}

}  // namespace detail

// Parses a line-oriented "key = value" configuration. A preset named in the
// [experiment] section (or forced by the caller) supplies the starting
// point; file entries override it in order, and the result is fully
// validated.
inline ExperimentConfig load_config_stream(std::istream& is,
                                           const std::optional<std::string>& preset_override = {}) {
  const auto entries = detail::parse_entries(is);
  ExperimentConfig cfg;
  if (preset_override) {
    cfg = make_preset(*preset_override);
  } else {
    for (const auto& e : entries)
      if (e.section == "experiment" && e.key == "preset") cfg = make_preset(e.value);
  }
  for (const auto& e : entries) detail::apply_entry(cfg, e);
  cfg.validate();
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path,
                                    const std::optional<std::string>& preset_override = {}) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config file: " + path);
  try {
    return load_config_stream(is, preset_override);
  } catch (const std::invalid_argument& err) {
    throw std::invalid_argument(path + ": " + err.what());
  }
}

}  // namespace cuavsim
