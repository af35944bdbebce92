#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "cuavsim/rng.hpp"
#include "cuavsim/ucb.hpp"

namespace cuavsim {

// Hyperparameters shared by the tabular learners. The state/action space
// sizes and horizon feed the confidence-bonus formula only.
struct TabularAgentConfig {
  double gamma = 0.9;
  double epsilon = 0.1;
  double c_alpha = 0.5;   // learning-rate schedule offset
  double phi_alpha = 0.8; // learning-rate schedule exponent, in (0.5, 1]
  double alpha0 = 0.9;    // learning-rate ceiling
  double ucb_c = 2.0;     // bonus scale c
  double ucb_p = 0.01;    // bonus confidence parameter p
  int horizon_h = 1;      // H
  long long total_slots = 1;      // T
  double state_space_size = 1.0;  // |S|; double, the analytic size overflows integers
  int action_space_size = 1;      // |A| = M + 1

  void validate() const {
    if (!(gamma >= 0.0 && gamma <= 1.0))
      throw std::invalid_argument("TabularAgentConfig: gamma not in [0,1]");
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
      throw std::invalid_argument("TabularAgentConfig: epsilon not in [0,1]");
    if (!(c_alpha > 0.0)) throw std::invalid_argument("TabularAgentConfig: c_alpha must be > 0");
    if (!(phi_alpha > 0.5 && phi_alpha <= 1.0))
      throw std::invalid_argument("TabularAgentConfig: phi_alpha not in (0.5,1]");
    if (!(alpha0 > 0.0 && alpha0 <= 1.0))
      throw std::invalid_argument("TabularAgentConfig: alpha0 not in (0,1]");
    if (!(ucb_c >= 0.0)) throw std::invalid_argument("TabularAgentConfig: ucb_c must be >= 0");
    if (!(ucb_p > 0.0 && ucb_p < 1.0))
      throw std::invalid_argument("TabularAgentConfig: ucb_p not in (0,1)");
    if (horizon_h < 1) throw std::invalid_argument("TabularAgentConfig: horizon_h must be >= 1");
    if (total_slots < 1) throw std::invalid_argument("TabularAgentConfig: total_slots must be >= 1");
    if (!(state_space_size >= 1.0))
      throw std::invalid_argument("TabularAgentConfig: state_space_size must be >= 1");
    if (action_space_size < 1)
      throw std::invalid_argument("TabularAgentConfig: action_space_size must be >= 1");
  }
};

// Sparse state-action value store. Only visited states are materialized;
// anything never written reads as q = 0, visits = 0.
class SparseQTable {
 public:
  struct Entry {
    double q = 0.0;
    std::uint64_t visits = 0;
  };

  explicit SparseQTable(int n_actions) : n_actions_(n_actions) {
    if (n_actions < 1) throw std::invalid_argument("SparseQTable: n_actions must be >= 1");
  }

  int n_actions() const { return n_actions_; }

  double q(std::uint64_t key, int action) const {
    const auto it = rows_.find(key);
    return it == rows_.end() ? 0.0 : it->second[check_action(action)].q;
  }

  std::uint64_t visits(std::uint64_t key, int action) const {
    const auto it = rows_.find(key);
    return it == rows_.end() ? 0 : it->second[check_action(action)].visits;
  }

  Entry& entry(std::uint64_t key, int action) {
    auto [it, inserted] = rows_.try_emplace(key);
    if (inserted) it->second.resize(n_actions_);
    return it->second[check_action(action)];
  }

  double max_q(std::uint64_t key) const {
    const auto it = rows_.find(key);
    if (it == rows_.end()) return 0.0;
    double best = it->second[0].q;
    for (int a = 1; a < n_actions_; ++a) best = std::max(best, it->second[a].q);
    return best;
  }

  // Greedy action, ties broken toward the lowest index.
  int argmax(std::uint64_t key) const {
    const auto it = rows_.find(key);
    if (it == rows_.end()) return 0;
    int best = 0;
    for (int a = 1; a < n_actions_; ++a)
      if (it->second[a].q > it->second[best].q) best = a;
    return best;
  }

  std::size_t n_states() const { return rows_.size(); }

  std::uint64_t total_visits() const {
    std::uint64_t sum = 0;
    for (const auto& [key, row] : rows_)
      for (const auto& e : row) sum += e.visits;
    return sum;
  }

  // Flat text dump, one "state_key,action,q,visits" line per non-default
  // entry, sorted for reproducible output.
  void dump(std::ostream& os) const {
    std::vector<std::uint64_t> keys;
    keys.reserve(rows_.size());
    for (const auto& [key, row] : rows_) keys.push_back(key);
    std::sort(keys.begin(), keys.end());
    os.precision(17);
    for (std::uint64_t key : keys) {
      const auto& row = rows_.at(key);
      for (int a = 0; a < n_actions_; ++a) {
        if (row[a].q == 0.0 && row[a].visits == 0) continue;
        os << key << ',' << a << ',' << row[a].q << ',' << row[a].visits << '\n';
      }
    }
  }

  void load(std::istream& is) {
    rows_.clear();
    std::uint64_t key = 0, visits = 0;
    int action = 0;
    double value = 0.0;
    char sep = 0;
    while (is >> key >> sep >> action >> sep >> value >> sep >> visits) {
      auto& e = entry(key, action);
      e.q = value;
      e.visits = visits;
    }
  }

 private:
  int check_action(int action) const {
    if (action < 0 || action >= n_actions_)
      throw std::out_of_range("SparseQTable: action out of range");
    return action;
  }

  int n_actions_;
  std::unordered_map<std::uint64_t, std::vector<Entry>> rows_;
};

// Learning-rate schedule min(alpha0, 1/(t + c_alpha)^phi_alpha).
inline double lr_schedule(long long t, const TabularAgentConfig& config) {
  if (t < 0) throw std::invalid_argument("lr_schedule: t must be >= 0");
  const double raw = std::pow(static_cast<double>(t) + config.c_alpha, -config.phi_alpha);
  return std::min(config.alpha0, raw);
}

// Confidence bonus for the (state, action) pair with the given visit count.
inline double ucb_bonus(std::uint64_t visits, const TabularAgentConfig& config) {
  return hoeffding_bonus(visits, config.ucb_c, config.horizon_h, config.state_space_size,
                         config.action_space_size, config.total_slots, config.ucb_p);
}

enum class SelectionMode { kGreedy, kEpsGreedy };

// Greedy or epsilon-greedy action choice over the table's row for `key`.
// Epsilon-greedy consumes one uniform draw, plus one more when exploring.
inline int select_action(const SparseQTable& table, std::uint64_t key,
                         const TabularAgentConfig& config, Rng& rng, SelectionMode mode) {
  if (mode == SelectionMode::kEpsGreedy && rng.uniform01() < config.epsilon)
    return static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(table.n_actions())));
  return table.argmax(key);
}

namespace detail {

// Shared update body. `with_bonus` only selects how the bonus is produced;
// the arithmetic is identical in both modes, so ucb_c = 0 reproduces the
// plain update bit for bit.
inline double update_q_impl(SparseQTable& table, std::uint64_t key, int action, double reward,
                            std::uint64_t next_key, long long t, const TabularAgentConfig& config,
                            bool with_bonus) {
  const double alpha = lr_schedule(t, config);
  const double max_next = table.max_q(next_key);
  auto& e = table.entry(key, action);
  e.visits += 1;
  const double bonus = with_bonus ? ucb_bonus(e.visits, config) : 0.0;
  e.q = (1.0 - alpha) * e.q + alpha * (reward + config.gamma * max_next + bonus);
  return e.q;
}

}  // namespace detail

// Plain independent-learner Q update.
inline double update_q_eps(SparseQTable& table, std::uint64_t key, int action, double reward,
                           std::uint64_t next_key, long long t, const TabularAgentConfig& config) {
  return detail::update_q_impl(table, key, action, reward, next_key, t, config, false);
}

// Q update with the UCB-H confidence bonus added to the target. The visit
// count is incremented first and the bonus uses the incremented count.
inline double update_q_ucbh(SparseQTable& table, std::uint64_t key, int action, double reward,
                            std::uint64_t next_key, long long t, const TabularAgentConfig& config) {
  return detail::update_q_impl(table, key, action, reward, next_key, t, config, true);
}

}  // namespace cuavsim
