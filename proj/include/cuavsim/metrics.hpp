#pragma once

#include <stdexcept>
#include <vector>

#include "cuavsim/env.hpp"

namespace cuavsim {

// Per-slot performance indicators.
struct SlotMetrics {
  long long slot = 0;
  double avg_reward = 0.0;
  double sensing_accuracy = 0.0;     // percent
  double channel_utilization = 0.0;  // percent
};

// Mean instant reward over all agents.
inline double average_reward(const std::vector<double>& rewards) {
  if (rewards.empty()) throw std::invalid_argument("average_reward: empty reward list");
  double sum = 0.0;
  for (double r : rewards) sum += r;
  return sum / static_cast<double>(rewards.size());
}

// Percentage of the M channels that were sensed by at least one agent and
// whose recorded verdict matches the ground truth. Unsensed channels count
// against the fixed denominator M.
inline double sensing_accuracy(const SlotOutcome& outcome, int m) {
  if (m < 1) throw std::invalid_argument("sensing_accuracy: m must be >= 1");
  int correct = 0;
  for (int ch = 0; ch < m; ++ch)
    if (outcome.fusion[ch] >= 0 && outcome.fusion[ch] == static_cast<std::int8_t>(outcome.truth[ch]))
      ++correct;
  return 100.0 * static_cast<double>(correct) / static_cast<double>(m);
}

// Percentage of channels selected by at least one agent.
inline double channel_utilization(const JointAction& joint, int m) {
  if (m < 1) throw std::invalid_argument("channel_utilization: m must be >= 1");
  std::vector<char> used(static_cast<std::size_t>(m), 0);
  for (int a : joint.actions)
    if (a > 0) used[a - 1] = 1;
  int distinct = 0;
  for (char u : used) distinct += u;
  return 100.0 * static_cast<double>(distinct) / static_cast<double>(m);
}

// Trailing-window moving average; element i averages the last
// min(i+1, window) values, so the output length equals the input length.
inline std::vector<double> moving_average(const std::vector<double>& series, int window) {
  if (window < 1) throw std::invalid_argument("moving_average: window must be >= 1");
  std::vector<double> out(series.size());
  double running = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    running += series[i];
    if (i >= static_cast<std::size_t>(window)) running -= series[i - window];
    const auto count = std::min<std::size_t>(i + 1, static_cast<std::size_t>(window));
    out[i] = running / static_cast<double>(count);
  }
  return out;
}

}  // namespace cuavsim
