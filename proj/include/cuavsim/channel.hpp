#pragma once

#include <stdexcept>

#include "cuavsim/rng.hpp"

namespace cuavsim {

// One primary-user channel: a two-state (idle/busy) Markov chain plus the
// per-agent sensing statistics and the bandwidth used for throughput and
// sensing-energy computation.
struct ChannelParams {
  double alpha = 0.0;          // P(idle -> busy) per slot
  double beta = 0.0;           // P(busy -> idle) per slot
  double bandwidth = 0.0;      // Hz
  double p_detect = 1.0;       // P(local decision = busy | busy)
  double p_false_alarm = 0.0;  // P(local decision = busy | idle)

  void validate() const {
    auto prob = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!prob(alpha)) throw std::invalid_argument("ChannelParams: alpha not in [0,1]");
    if (!prob(beta)) throw std::invalid_argument("ChannelParams: beta not in [0,1]");
    if (!prob(p_detect)) throw std::invalid_argument("ChannelParams: p_detect not in [0,1]");
    if (!prob(p_false_alarm))
      throw std::invalid_argument("ChannelParams: p_false_alarm not in [0,1]");
    if (!(bandwidth > 0.0)) throw std::invalid_argument("ChannelParams: bandwidth must be > 0");
  }
};

// Advances the channel occupancy by one slot. Exactly one rng draw.
inline int step_channel(int occ, const ChannelParams& params, Rng& rng) {
  const double u = rng.uniform01();
  if (occ == 0) return u < params.alpha ? 1 : 0;
  return u < params.beta ? 0 : 1;
}

// Long-run busy probability alpha / (alpha + beta).
inline double stationary_busy_prob(const ChannelParams& params) {
  const double sum = params.alpha + params.beta;
  if (sum <= 0.0)
    throw std::domain_error("stationary_busy_prob: degenerate chain (alpha + beta = 0)");
  return params.alpha / sum;
}

// One agent's local sensing decision for the channel. Exactly one rng draw;
// draws are independent across agents and slots.
inline int sense_local(int truth, const ChannelParams& params, Rng& rng) {
  const double p_busy_report = truth == 1 ? params.p_detect : params.p_false_alarm;
  return rng.bernoulli(p_busy_report) ? 1 : 0;
}

}  // namespace cuavsim
