#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cuavsim/network.hpp"

namespace cuavsim {

// K-out-of-N fusion: busy iff at least k of the local decisions say busy.
// k=1 is the OR rule, k=|decisions| the AND rule.
inline int fuse(const std::vector<int>& decisions, int k) {
  if (decisions.empty()) throw std::invalid_argument("fuse: no sensing decisions");
  if (k < 1) throw std::invalid_argument("fuse: k must be >= 1");
  int busy_votes = 0;
  for (int d : decisions) busy_votes += d;
  return busy_votes >= k ? 1 : 0;
}

// SINR of `agent` on `channel` (1-based) given the set of co-channel
// transmitters. Interference is summed over the other members of the set.
inline double sinr(int agent, int channel, const std::vector<int>& selectors,
                   const NetworkConfig& config) {
  const int ch = channel - 1;
  double interference = 0.0;
  for (int other : selectors) {
    if (other == agent) continue;
    interference += config.gain_cross(agent, other, ch) * config.p_transmit;
  }
  const double signal = config.gain_self(agent, ch) * config.p_transmit;
  return signal / (interference + config.sigma2(channel));
}

// Data transmitted over the access sub-frame, bits.
inline double throughput(int channel, double sinr_value, const NetworkConfig& config) {
  return config.tau_transmit * config.channels[channel - 1].bandwidth *
         std::log2(1.0 + sinr_value);
}

// Energy spent sensing `channel` for one sensing sub-frame.
inline double sensing_energy(int channel, const NetworkConfig& config) {
  return config.tau_sense * config.v_dd * config.v_dd * config.channels[channel - 1].bandwidth;
}

// Energy spent transmitting for one access sub-frame.
inline double transmission_energy(const NetworkConfig& config) {
  return config.tau_transmit * config.p_transmit;
}

// Per-agent slot reward. `truth` and `fusion` are the channel occupancy and
// the sensing verdict the agent acted on; `sinr_value` feeds the throughput
// term of the idle-channel cases.
inline double reward(int /*agent*/, int action, int truth, int fusion, double sinr_value,
                     const NetworkConfig& config) {
  if (action == 0) return 0.0;
  const double e_ss = sensing_energy(action, config);
  const double e_dt = transmission_energy(config);
  if (truth == 1 && fusion == 1) return -e_ss;
  if (truth == 1 && fusion == 0) return -e_ss - e_dt;
  const double r = throughput(action, sinr_value, config);
  if (fusion == 0) return -config.eta * e_ss - config.mu * e_dt + (1.0 - config.eta - config.mu) * r;
  return -config.eta * e_ss - (1.0 - config.eta) * r;
}

// Everything observable about one simulated slot.
struct SlotOutcome {
  std::vector<std::uint8_t> truth;       // ground-truth occupancy this slot, size M
  std::vector<std::int8_t> local_decisions;  // per agent; -1 when idle
  std::vector<std::int8_t> fusion;       // per channel; -1 when unsensed
  std::vector<std::uint8_t> transmitted; // per agent
  std::vector<double> rewards;           // per agent
  GlobalState next_state;
};

namespace detail {

// Core slot dynamics, with the pre-slot ground truth passed explicitly so
// that both observation modes share one implementation.
inline SlotOutcome step_slot(const std::vector<std::uint8_t>& truth_before,
                             const GlobalState& state, const JointAction& joint,
                             const NetworkConfig& config, Rng& rng) {
  const int n = config.n_agents;
  const int m = config.n_channels;
  if (static_cast<int>(joint.actions.size()) != n)
    throw std::invalid_argument("env_step: joint action size != n_agents");
  for (int a : joint.actions)
    if (a < 0 || a > m) throw std::invalid_argument("env_step: action out of range");

  SlotOutcome out;
  out.truth.resize(m);
  out.local_decisions.assign(n, -1);
  out.fusion.assign(m, -1);
  out.transmitted.assign(n, 0);
  out.rewards.assign(n, 0.0);

  // 1. PU channels evolve; one draw per channel in channel order.
  for (int ch = 0; ch < m; ++ch)
    out.truth[ch] =
        static_cast<std::uint8_t>(step_channel(truth_before[ch], config.channels[ch], rng));

  // 2. Local sensing, one draw per selecting agent in agent-index order.
  std::vector<std::vector<int>> selectors(m);  // agents per channel
  for (int agent = 0; agent < n; ++agent) {
    const int action = joint.actions[agent];
    if (action == 0) continue;
    selectors[action - 1].push_back(agent);
    out.local_decisions[agent] = static_cast<std::int8_t>(
        sense_local(out.truth[action - 1], config.channels[action - 1], rng));
  }

  // 3. Fusion per sensed channel. In the non-cooperative mode each agent
  //    keeps its private decision; the recorded per-channel verdict equals
  //    the truth iff every selector observed correctly.
  for (int ch = 0; ch < m; ++ch) {
    if (selectors[ch].empty()) continue;
    if (config.cooperative) {
      std::vector<int> decisions;
      decisions.reserve(selectors[ch].size());
      for (int agent : selectors[ch]) decisions.push_back(out.local_decisions[agent]);
      out.fusion[ch] = static_cast<std::int8_t>(
          fuse(decisions, config.fusion_threshold(static_cast<int>(decisions.size()))));
    } else {
      bool all_correct = true;
      for (int agent : selectors[ch])
        all_correct = all_correct && out.local_decisions[agent] == out.truth[ch];
      out.fusion[ch] = static_cast<std::int8_t>(all_correct ? out.truth[ch] : 1 - out.truth[ch]);
    }
  }

  // 4. Access: an agent transmits iff the verdict it acts on says idle.
  std::vector<std::vector<int>> transmitters(m);
  auto verdict_for = [&](int agent, int ch) {
    return config.cooperative ? static_cast<int>(out.fusion[ch])
                              : static_cast<int>(out.local_decisions[agent]);
  };
  for (int ch = 0; ch < m; ++ch)
    for (int agent : selectors[ch])
      if (verdict_for(agent, ch) == 0) {
        transmitters[ch].push_back(agent);
        out.transmitted[agent] = 1;
      }

  // 5. Rewards. The throughput term sees interference from the agents that
  //    actually transmit on the channel; for a false-alarmed agent the lost
  //    utility is evaluated against those same transmitters.
  for (int agent = 0; agent < n; ++agent) {
    const int action = joint.actions[agent];
    if (action == 0) continue;
    const int ch = action - 1;
    const int truth = out.truth[ch];
    const int verdict = verdict_for(agent, ch);
    double sinr_value = 0.0;
    if (truth == 0) {
      double interference = 0.0;
      for (int other : transmitters[ch])
        if (other != agent) interference += config.gain_cross(agent, other, ch) * config.p_transmit;
      sinr_value = config.gain_self(agent, ch) * config.p_transmit /
                   (interference + config.sigma2(action));
    }
    out.rewards[agent] = reward(agent, action, truth, verdict, sinr_value, config);
  }

  // 6. Next state: selector counts from the joint action, occupancy bits per
  //    the configured observation mode.
  out.next_state.selectors.assign(static_cast<std::size_t>(m) + 1, 0);
  for (int a : joint.actions) ++out.next_state.selectors[a];
  out.next_state.occupancy.resize(m);
  for (int ch = 0; ch < m; ++ch) {
    if (config.observation_mode == ObservationMode::kGroundTruth) {
      out.next_state.occupancy[ch] = out.truth[ch];
    } else {
      out.next_state.occupancy[ch] = out.fusion[ch] >= 0
                                         ? static_cast<std::uint8_t>(out.fusion[ch])
                                         : state.occupancy[ch];
    }
  }
  return out;
}

}  // namespace detail

// One slot of sense -> cooperate -> access dynamics. The state's occupancy
// bits are taken as the pre-slot ground truth, which is exact under the
// default ground-truth observation mode.
inline SlotOutcome env_step(const GlobalState& state, const JointAction& joint,
                            const NetworkConfig& config, Rng& rng) {
  return detail::step_slot(state.occupancy, state, joint, config, rng);
}

// Owns the mutable pieces of one simulation: the true channel occupancy
// (which the fusion-carry-forward mode hides from the agents), the shared
// state, and the environment rng stream.
class Environment {
 public:
  Environment(NetworkConfig config, Rng rng) : config_(std::move(config)), rng_(rng) {
    config_.validate();
    reset();
  }

  // Draws initial occupancy from each channel's stationary distribution
  // (one draw per channel); all agents start idle.
  void reset() {
    const int m = config_.n_channels;
    truth_.resize(m);
    for (int ch = 0; ch < m; ++ch) {
      const auto& c = config_.channels[ch];
      const double p_busy = c.alpha + c.beta > 0.0 ? c.alpha / (c.alpha + c.beta) : 0.0;
      truth_[ch] = rng_.bernoulli(p_busy) ? 1 : 0;
    }
    state_ = make_idle_state(config_.n_agents, m);
    state_.occupancy = truth_;
  }

  SlotOutcome step(const JointAction& joint) {
    SlotOutcome out = detail::step_slot(truth_, state_, joint, config_, rng_);
    truth_ = out.truth;
    state_ = out.next_state;
    return out;
  }

  const GlobalState& state() const { return state_; }
  const NetworkConfig& config() const { return config_; }

 private:
  NetworkConfig config_;
  Rng rng_;
  std::vector<std::uint8_t> truth_;
  GlobalState state_;
};

}  // namespace cuavsim
