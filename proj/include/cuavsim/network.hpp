#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cuavsim/channel.hpp"

namespace cuavsim {

enum class ObservationMode {
  kGroundTruth,        // state occupancy bits are the true previous-slot states
  kFusionCarryForward  // sensed channels show the last fusion result instead
};

// Thermal noise power spectral density at 290 K, W/Hz (-174 dBm/Hz).
inline constexpr double kThermalNoisePsd = 3.9810717055349565e-21;

// Static description of the CUAV network: channels, frame timing, radio
// constants, fusion and observation policy, and the quasi-static channel
// gains (drawn once per run and then held fixed).
struct NetworkConfig {
  int n_agents = 0;                     // N
  int n_channels = 0;                   // M
  std::vector<ChannelParams> channels;  // size M

  double tau_sense = 0.0;     // sensing sub-frame, s
  double tau_transmit = 0.0;  // transmission sub-frame, s
  double v_dd = 1.0;          // receiver working voltage, V
  double p_transmit = 0.0;    // transmit power, W
  double noise_power = -1.0;  // sigma^2, W; < 0 means thermal default per channel
  double eta = 0.0;           // sensing-cost weight
  double mu = 0.0;            // access-cost weight

  int fusion_k = 0;  // 0 = per-slot majority over the selectors, else fixed K
  bool cooperative = true;
  ObservationMode observation_mode = ObservationMode::kGroundTruth;

  std::vector<double> gains_self;   // N x M row-major: g_{n,m}
  std::vector<double> gains_cross;  // N x N x M: g^n_{j,m} at ((n*N)+j)*M+m

  double gain_self(int agent, int channel) const {
    return gains_self[static_cast<std::size_t>(agent) * n_channels + channel];
  }
  double gain_cross(int receiver, int interferer, int channel) const {
    return gains_cross[(static_cast<std::size_t>(receiver) * n_agents + interferer) *
                           n_channels +
                       channel];
  }

  // sigma^2 on channel m (1-based), thermal-scaled with bandwidth by default.
  double sigma2(int channel) const {
    if (noise_power >= 0.0) return noise_power;
    return kThermalNoisePsd * channels[channel - 1].bandwidth;
  }

  // Effective fusion threshold for a channel sensed by `n_selectors` agents.
  int fusion_threshold(int n_selectors) const {
    if (fusion_k > 0) return fusion_k;
    return (n_selectors + 1) / 2;  // majority: ceil(n/2)
  }

  void validate() const {
    if (n_agents < 1) throw std::invalid_argument("NetworkConfig: n_agents must be >= 1");
    if (n_channels < 1) throw std::invalid_argument("NetworkConfig: n_channels must be >= 1");
    if (static_cast<int>(channels.size()) != n_channels)
      throw std::invalid_argument("NetworkConfig: channels size != n_channels");
    for (const auto& ch : channels) ch.validate();
    if (!(tau_sense > 0.0)) throw std::invalid_argument("NetworkConfig: tau_sense must be > 0");
    if (!(tau_transmit > 0.0))
      throw std::invalid_argument("NetworkConfig: tau_transmit must be > 0");
    if (!(p_transmit > 0.0)) throw std::invalid_argument("NetworkConfig: p_transmit must be > 0");
    if (noise_power >= 0.0 && !(noise_power > 0.0))
      throw std::invalid_argument("NetworkConfig: noise_power must be > 0");
    if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("NetworkConfig: eta not in (0,1)");
    if (!(mu > 0.0 && mu < 1.0)) throw std::invalid_argument("NetworkConfig: mu not in (0,1)");
    if (!(eta + mu < 1.0)) throw std::invalid_argument("NetworkConfig: eta + mu must be < 1");
    if (fusion_k < 0 || fusion_k > n_agents)
      throw std::invalid_argument("NetworkConfig: fusion_k out of range");
    const auto self_expected = static_cast<std::size_t>(n_agents) * n_channels;
    const auto cross_expected = self_expected * n_agents;
    if (gains_self.size() != self_expected)
      throw std::invalid_argument("NetworkConfig: gains_self size mismatch");
    if (gains_cross.size() != cross_expected)
      throw std::invalid_argument("NetworkConfig: gains_cross size mismatch");
    for (double g : gains_self)
      if (!(g > 0.0)) throw std::invalid_argument("NetworkConfig: gains_self must be > 0");
    for (double g : gains_cross)
      if (!(g > 0.0)) throw std::invalid_argument("NetworkConfig: gains_cross must be > 0");
  }
};

// Draws the quasi-static channel gains, log-uniform over a dB range.
inline void draw_gains(NetworkConfig& config, Rng& rng, double self_db_lo = -80.0,
                       double self_db_hi = -60.0, double cross_db_lo = -90.0,
                       double cross_db_hi = -70.0) {
  const int n = config.n_agents;
  const int m = config.n_channels;
  config.gains_self.resize(static_cast<std::size_t>(n) * m);
  for (auto& g : config.gains_self) g = std::pow(10.0, rng.uniform(self_db_lo, self_db_hi) / 10.0);
  config.gains_cross.resize(static_cast<std::size_t>(n) * n * m);
  for (int recv = 0; recv < n; ++recv)
    for (int src = 0; src < n; ++src)
      for (int ch = 0; ch < m; ++ch) {
        auto idx = (static_cast<std::size_t>(recv) * n + src) * m + ch;
        config.gains_cross[idx] =
            recv == src ? config.gains_self[static_cast<std::size_t>(recv) * m + ch]
                        : std::pow(10.0, rng.uniform(cross_db_lo, cross_db_hi) / 10.0);
      }
}

// Shared Markov-game state: how many agents picked each channel in the
// previous slot (index 0 = idle) and the observed occupancy bits.
struct GlobalState {
  std::vector<int> selectors;        // size M+1, sums to N
  std::vector<std::uint8_t> occupancy;  // size M, occupancy[m-1] = o_m

  bool operator==(const GlobalState&) const = default;
};

// One action per agent; 0 = stay idle, m in 1..M = sense and access channel m.
struct JointAction {
  std::vector<int> actions;
};

inline GlobalState make_idle_state(int n_agents, int n_channels) {
  GlobalState s;
  s.selectors.assign(static_cast<std::size_t>(n_channels) + 1, 0);
  s.selectors[0] = n_agents;
  s.occupancy.assign(static_cast<std::size_t>(n_channels), 0);
  return s;
}

// Flat input vector for the value networks: [s_0..s_M, o_1..o_M], length 2M+1.
inline std::vector<double> encode_state_vector(const GlobalState& state) {
  std::vector<double> v;
  v.reserve(state.selectors.size() + state.occupancy.size());
  for (int s : state.selectors) v.push_back(static_cast<double>(s));
  for (auto o : state.occupancy) v.push_back(static_cast<double>(o));
  return v;
}

// Collision-free mixed-radix key over (s_1..s_M, o_1..o_M). s_0 is implied
// by the sum invariant and excluded. Requires M*(log2(N+1)+1) <= 64 bits.
inline std::uint64_t state_key(const GlobalState& state, int n_agents) {
  const auto m = state.occupancy.size();
  const auto radix = static_cast<std::uint64_t>(n_agents) + 1;
  std::uint64_t key = 0;
  for (std::size_t ch = 1; ch <= m; ++ch) {
    key = key * radix + static_cast<std::uint64_t>(state.selectors[ch]);
  }
  for (std::size_t ch = 0; ch < m; ++ch) {
    key = (key << 1) | state.occupancy[ch];
  }
  return key;
}

}  // namespace cuavsim
