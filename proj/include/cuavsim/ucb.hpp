#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace cuavsim {

// Hoeffding-style confidence bonus c * sqrt(H^3 ln(|S||A|T/p) / visits),
// shared by the tabular and the network-based learners. The log argument is
// assembled in log space since the analytic |S| overflows integer ranges.
inline double hoeffding_bonus(std::uint64_t visits, double c, int horizon_h,
                              double state_space_size, int action_space_size,
                              long long total_slots, double p) {
  if (visits < 1) throw std::invalid_argument("hoeffding_bonus: visits must be >= 1");
  const double log_term = std::log(state_space_size) +
                          std::log(static_cast<double>(action_space_size)) +
                          std::log(static_cast<double>(total_slots)) - std::log(p);
  const double h = static_cast<double>(horizon_h);
  return c * std::sqrt(h * h * h * log_term / static_cast<double>(visits));
}

}  // namespace cuavsim
