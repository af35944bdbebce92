#pragma once

#include <vector>

#include "cuavsim/network.hpp"

namespace cuavsim::test {

// Small network with unit gains and unit noise so SINR and reward values
// can be checked against hand arithmetic.
inline NetworkConfig flat_network(int n_agents, int n_channels, double bandwidth = 50e6,
                                  double p_transmit = 1.0) {
  NetworkConfig net;
  net.n_agents = n_agents;
  net.n_channels = n_channels;
  net.channels.assign(n_channels, ChannelParams{0.2, 0.3, bandwidth, 0.9, 0.1});
  net.tau_sense = 1e-4;
  net.tau_transmit = 5e-4;
  net.v_dd = 1.0;
  net.p_transmit = p_transmit;
  net.noise_power = 1.0;
  net.eta = 0.01;
  net.mu = 0.05;
  net.fusion_k = 0;
  net.gains_self.assign(static_cast<std::size_t>(n_agents) * n_channels, 1.0);
  net.gains_cross.assign(static_cast<std::size_t>(n_agents) * n_agents * n_channels, 1.0);
  return net;
}

}  // namespace cuavsim::test
