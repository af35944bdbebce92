#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "cuavsim/net.hpp"
#include "cuavsim/network.hpp"
#include "cuavsim/rng.hpp"
#include "cuavsim/ucb.hpp"

namespace cuavsim {

enum class ExplorationMode { kEpsGreedy, kUcbH };

// Hyperparameters of the double-DQN independent learner.
struct DdqnConfig {
  double gamma = 0.9;
  double epsilon = 0.1;
  int batch = 64;          // B
  int sync_period = 100;   // F
  int capacity = 20000;    // C
  double zeta = 1e-3;      // Adam learning rate
  int train_start = 64;    // minimum buffer fill before training
  std::vector<int> hidden = {64, 64};
  ExplorationMode exploration_mode = ExplorationMode::kUcbH;
  // bonus inputs, as in TabularAgentConfig
  double ucb_c = 2.0;
  double ucb_p = 0.01;
  int horizon_h = 1;
  long long total_slots = 1;
  double state_space_size = 1.0;
  int action_space_size = 1;

  void validate() const {
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("DdqnConfig: gamma not in [0,1]");
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
      throw std::invalid_argument("DdqnConfig: epsilon not in [0,1]");
    if (batch < 1 || batch > capacity)
      throw std::invalid_argument("DdqnConfig: need 0 < batch <= capacity");
    if (sync_period < 1) throw std::invalid_argument("DdqnConfig: sync_period must be >= 1");
    if (!(zeta > 0.0)) throw std::invalid_argument("DdqnConfig: zeta must be > 0");
    if (train_start < 1) throw std::invalid_argument("DdqnConfig: train_start must be >= 1");
    for (int h : hidden)
      if (h < 1) throw std::invalid_argument("DdqnConfig: hidden widths must be >= 1");
    if (!(ucb_c >= 0.0)) throw std::invalid_argument("DdqnConfig: ucb_c must be >= 0");
    if (!(ucb_p > 0.0 && ucb_p < 1.0)) throw std::invalid_argument("DdqnConfig: ucb_p not in (0,1)");
    if (horizon_h < 1) throw std::invalid_argument("DdqnConfig: horizon_h must be >= 1");
    if (total_slots < 1) throw std::invalid_argument("DdqnConfig: total_slots must be >= 1");
    if (action_space_size < 1)
      throw std::invalid_argument("DdqnConfig: action_space_size must be >= 1");
  }
};

// One replay tuple. The tabular state key of the pre-slot state rides along
// so the UCB visit counter never has to be reconstructed from the vector.
struct Experience {
  std::vector<double> state;
  int action = 0;
  double reward = 0.0;
  std::vector<double> next_state;
  std::uint64_t state_key = 0;
};

// FIFO experience store with uniform without-replacement sampling.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(int capacity) : capacity_(capacity) {
    if (capacity < 1) throw std::invalid_argument("ReplayBuffer: capacity must be >= 1");
  }

  int capacity() const { return capacity_; }
  int size() const { return static_cast<int>(entries_.size()); }

  // Oldest-first access.
  const Experience& at(int i) const { return entries_[(head_ + i) % entries_.size()]; }

  void push(Experience e) {
    if (size() < capacity_) {
      entries_.push_back(std::move(e));
    } else {
      entries_[head_] = std::move(e);
      head_ = (head_ + 1) % entries_.size();
    }
  }

  // b distinct tuples drawn uniformly (Floyd's algorithm; O(b) draws).
  std::vector<const Experience*> sample(int b, Rng& rng) const {
    if (b < 1 || b > size()) throw std::invalid_argument("ReplayBuffer: sample size exceeds buffer");
    std::vector<int> picked;
    picked.reserve(b);
    for (int i = size() - b; i < size(); ++i) {
      const int j = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(i) + 1));
      if (std::find(picked.begin(), picked.end(), j) != picked.end())
        picked.push_back(i);
      else
        picked.push_back(j);
    }
    std::vector<const Experience*> batch;
    batch.reserve(b);
    for (int idx : picked) batch.push_back(&at(idx));
    return batch;
  }

 private:
  int capacity_;
  std::size_t head_ = 0;
  std::vector<Experience> entries_;
};

// Sparse per-(state, action) visit counter for the UCB bonus.
class VisitCounter {
 public:
  explicit VisitCounter(int n_actions) : n_actions_(n_actions) {}

  void increment(std::uint64_t state_key, int action) { ++counts_[combined(state_key, action)]; }

  std::uint64_t count(std::uint64_t state_key, int action) const {
    const auto it = counts_.find(combined(state_key, action));
    return it == counts_.end() ? 0 : it->second;
  }

  std::size_t n_pairs() const { return counts_.size(); }

 private:
  std::uint64_t combined(std::uint64_t key, int action) const {
    return key * static_cast<std::uint64_t>(n_actions_) + static_cast<std::uint64_t>(action);
  }

  int n_actions_;
  std::unordered_map<std::uint64_t, std::uint64_t> counts_;
};

// Double-Q targets: the current network picks the bootstrap action at s',
// the target network evaluates it. In UCB-H mode the confidence bonus of
// the tuple's own (state, action) pair is added.
inline std::vector<double> compute_targets(const std::vector<const Experience*>& batch,
                                           const DenseNet& current, const DenseNet& target,
                                           const VisitCounter& visits, const DdqnConfig& config,
                                           NetWorkspace& ws) {
  std::vector<double> targets;
  targets.reserve(batch.size());
  for (const Experience* e : batch) {
    const auto& q_current = forward_into(current, e->next_state.data(), ws);
    int best = 0;
    for (int a = 1; a < static_cast<int>(q_current.size()); ++a)
      if (q_current[a] > q_current[best]) best = a;
    const auto& q_target = forward_into(target, e->next_state.data(), ws);
    double bonus = 0.0;
    if (config.exploration_mode == ExplorationMode::kUcbH) {
      // Tuples always come from acting, so the count is >= 1 in the normal
      // loop; a restored buffer without counts is treated as first visits.
      const std::uint64_t n = std::max<std::uint64_t>(1, visits.count(e->state_key, e->action));
      bonus = hoeffding_bonus(n, config.ucb_c, config.horizon_h, config.state_space_size,
                              config.action_space_size, config.total_slots, config.ucb_p);
    }
    targets.push_back(e->reward + config.gamma * q_target[best] + bonus);
  }
  return targets;
}

inline std::vector<double> compute_targets(const std::vector<const Experience*>& batch,
                                           const DenseNet& current, const DenseNet& target,
                                           const VisitCounter& visits, const DdqnConfig& config) {
  NetWorkspace ws;
  return compute_targets(batch, current, target, visits, config, ws);
}

// Independent double-DQN learner: current/target networks, replay buffer,
// Adam state and the UCB visit counter.
class DdqnAgent {
 public:
  DdqnAgent(int input_size, int n_actions, const DdqnConfig& config, Rng& init_rng)
      : config_(config),
        buffer_(config.capacity),
        visits_(n_actions),
        n_actions_(n_actions) {
    config_.validate();
    std::vector<int> sizes;
    sizes.push_back(input_size);
    for (int h : config_.hidden) sizes.push_back(h);
    sizes.push_back(n_actions);
    current_ = make_dense_net(sizes, init_rng);
    target_ = clone_params(current_);
    opt_ = AdamState::like(current_, config_.zeta);
    grads_ = Gradients::like(current_);
  }

  // Epsilon-greedy action on the current network; records the visit.
  int act(const GlobalState& state, Rng& rng) {
    int action;
    if (rng.uniform01() < config_.epsilon) {
      action = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n_actions_)));
    } else {
      const auto input = encode_state_vector(state);
      const auto& q = forward_into(current_, input.data(), ws_);
      action = 0;
      for (int a = 1; a < n_actions_; ++a)
        if (q[a] > q[action]) action = a;
    }
    visits_.increment(state_key(state, n_agents_of(state)), action);
    return action;
  }

  void observe(const GlobalState& state, int action, double reward, const GlobalState& next) {
    Experience e;
    e.state = encode_state_vector(state);
    e.action = action;
    e.reward = reward;
    e.next_state = encode_state_vector(next);
    e.state_key = state_key(state, n_agents_of(state));
    buffer_.push(std::move(e));
  }

  // One gradient step on a sampled batch; no-op until the buffer holds
  // max(train_start, batch) tuples.
  std::optional<double> train_step(Rng& rng) {
    if (buffer_.size() < std::max(config_.train_start, config_.batch)) return std::nullopt;
    const auto batch = buffer_.sample(config_.batch, rng);
    const auto targets = compute_targets(batch, current_, target_, visits_, config_, ws_);
    batch_inputs_.resize(batch.size());
    batch_actions_.resize(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
      batch_inputs_[i] = batch[i]->state;
      batch_actions_[i] = batch[i]->action;
    }
    const double loss = backward_into(current_, batch_inputs_, batch_actions_, targets, grads_, ws_);
    adam_step(current_, grads_, opt_);
    return loss;
  }

  // Copies the current network into the target network every F-th slot.
  bool maybe_sync_target(long long t) {
    if (t < 0) throw std::invalid_argument("maybe_sync_target: t must be >= 0");
    if (t % config_.sync_period != 0) return false;
    target_ = clone_params(current_);
    return true;
  }

  // Buffer-size header followed by both networks in the flat text format.
  void save(std::ostream& os) const {
    os << "buffer " << buffer_.size() << '\n';
    dump_net(current_, os);
    dump_net(target_, os);
  }

  const DenseNet& current_net() const { return current_; }
  const DenseNet& target_net() const { return target_; }
  const ReplayBuffer& buffer() const { return buffer_; }
  const VisitCounter& visit_counts() const { return visits_; }
  const DdqnConfig& config() const { return config_; }

 private:
  static int n_agents_of(const GlobalState& state) {
    int n = 0;
    for (int s : state.selectors) n += s;
    return n;
  }

  DdqnConfig config_;
  DenseNet current_;
  DenseNet target_;
  AdamState opt_;
  Gradients grads_;
  ReplayBuffer buffer_;
  VisitCounter visits_;
  NetWorkspace ws_;
  std::vector<std::vector<double>> batch_inputs_;
  std::vector<int> batch_actions_;
  int n_actions_;
};

}  // namespace cuavsim
