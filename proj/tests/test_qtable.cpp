#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "cuavsim/qtable.hpp"

using namespace cuavsim;

namespace {

TabularAgentConfig small_config() {
  TabularAgentConfig cfg;
  cfg.gamma = 0.9;
  cfg.epsilon = 0.1;
  cfg.ucb_c = 2.0;
  cfg.ucb_p = 0.01;
  cfg.horizon_h = 1;
  cfg.total_slots = 100;
  cfg.state_space_size = 2.0;
  cfg.action_space_size = 2;
  return cfg;
}

}  // namespace

TEST_CASE("sparse table defaults to zero", "[qtable]") {
  SparseQTable table(4);
  REQUIRE(table.q(123, 2) == 0.0);
  REQUIRE(table.visits(123, 2) == 0);
  REQUIRE(table.max_q(55) == 0.0);
  REQUIRE(table.argmax(55) == 0);
  REQUIRE(table.n_states() == 0);
}

TEST_CASE("lr schedule follows the clamped power law", "[qtable]") {
  TabularAgentConfig cfg = small_config();
  // 1/(10 + 0.5)^0.8 evaluated independently
  REQUIRE(lr_schedule(10, cfg) == Catch::Approx(0.15242231756575916).epsilon(1e-12));
  // raw value 1/0.5^0.8 = 1.741 exceeds the 0.9 ceiling
  REQUIRE(lr_schedule(0, cfg) == 0.9);
  REQUIRE(lr_schedule(1000000, cfg) < 1e-4);
  REQUIRE_THROWS_AS(lr_schedule(-1, cfg), std::invalid_argument);
}

TEST_CASE("ucb bonus matches the hand-evaluated formula", "[qtable]") {
  TabularAgentConfig cfg = small_config();
  // 2 * sqrt(ln(2*2*100/0.01)) = 2 * sqrt(ln(40000))
  REQUIRE(ucb_bonus(1, cfg) == Catch::Approx(6.510494522874917).epsilon(1e-12));
  REQUIRE(ucb_bonus(4, cfg) == Catch::Approx(6.510494522874917 / 2).epsilon(1e-12));
  cfg.ucb_c = 0.0;
  REQUIRE(ucb_bonus(1, cfg) == 0.0);
  REQUIRE(ucb_bonus(1000, cfg) == 0.0);
  REQUIRE_THROWS_AS(ucb_bonus(0, cfg), std::invalid_argument);
}

TEST_CASE("bonus sequence decays like 1/sqrt(k)", "[qtable]") {
  TabularAgentConfig cfg = small_config();
  double prev = ucb_bonus(1, cfg);
  for (std::uint64_t k = 2; k <= 50; ++k) {
    const double b = ucb_bonus(k, cfg);
    REQUIRE(b < prev);
    REQUIRE(b == Catch::Approx(ucb_bonus(1, cfg) / std::sqrt(static_cast<double>(k))));
    prev = b;
  }
}

TEST_CASE("greedy selection breaks ties toward the lowest action", "[qtable]") {
  TabularAgentConfig cfg = small_config();
  SparseQTable table(4);
  Rng rng(1);
  REQUIRE(select_action(table, 9, cfg, rng, SelectionMode::kGreedy) == 0);
  table.entry(9, 2).q = 1.0;
  REQUIRE(select_action(table, 9, cfg, rng, SelectionMode::kGreedy) == 2);
}

TEST_CASE("greedy choice is invariant to constant shifts", "[qtable]") {
  TabularAgentConfig cfg = small_config();
  Rng rng(2);
  SparseQTable table(5);
  for (int a = 0; a < 5; ++a) table.entry(3, a).q = rng.uniform(-2.0, 2.0);
  const int before = select_action(table, 3, cfg, rng, SelectionMode::kGreedy);
  for (int a = 0; a < 5; ++a) table.entry(3, a).q += 17.25;
  REQUIRE(select_action(table, 3, cfg, rng, SelectionMode::kGreedy) == before);
}

TEST_CASE("full exploration draws actions uniformly", "[qtable]") {
  TabularAgentConfig cfg = small_config();
  cfg.epsilon = 1.0;
  SparseQTable table(6);
  Rng rng(42);
  int counts[6] = {0};
  constexpr int kDraws = 100000;
  for (int i = 0; i < kDraws; ++i)
    ++counts[select_action(table, 0, cfg, rng, SelectionMode::kEpsGreedy)];
  for (int c : counts)
    REQUIRE(static_cast<double>(c) / kDraws == Catch::Approx(1.0 / 6).margin(0.02));
}

TEST_CASE("q updates match hand arithmetic", "[qtable]") {
  TabularAgentConfig cfg = small_config();
  cfg.alpha0 = 1.0;
  cfg.c_alpha = 1.0;  // raw schedule gives alpha = 1 at t = 0
  cfg.gamma = 0.0;
  SparseQTable table(2);
  REQUIRE(update_q_eps(table, 0, 1, 5.0, 1, 0, cfg) == 5.0);
  REQUIRE(table.visits(0, 1) == 1);

  // alpha = 0.5, Q = 0, gamma = 0.9, r = 1, max next = 10 -> 0.5 * (1 + 9)
  TabularAgentConfig cfg2 = small_config();
  cfg2.alpha0 = 0.5;
  cfg2.gamma = 0.9;
  SparseQTable t2(2);
  t2.entry(7, 0).q = 10.0;
  REQUIRE(update_q_eps(t2, 3, 0, 1.0, 7, 0, cfg2) == Catch::Approx(5.0).epsilon(1e-12));

  // zero rewards on an empty table stay at the fixed point
  SparseQTable t3(2);
  REQUIRE(update_q_eps(t3, 1, 0, 0.0, 1, 0, cfg2) == 0.0);
}

TEST_CASE("ucbh update adds the first-visit bonus", "[qtable]") {
  TabularAgentConfig cfg = small_config();
  cfg.alpha0 = 1.0;
  cfg.c_alpha = 1.0;
  cfg.gamma = 0.0;
  SparseQTable table(2);
  const double q = update_q_ucbh(table, 0, 0, 0.0, 1, 0, cfg);
  REQUIRE(q == Catch::Approx(6.510494522874917).epsilon(1e-12));
}

TEST_CASE("ucbh with zero bonus scale is bitwise identical to the plain update", "[qtable]") {
  TabularAgentConfig cfg = small_config();
  cfg.ucb_c = 0.0;
  SparseQTable eps(3), ucb(3);
  Rng rng(31);
  for (long long t = 0; t < 5000; ++t) {
    const std::uint64_t key = rng.uniform_int(20);
    const std::uint64_t next = rng.uniform_int(20);
    const int action = static_cast<int>(rng.uniform_int(3));
    const double reward = rng.uniform(-5.0, 5.0);
    const double a = update_q_eps(eps, key, action, reward, next, t, cfg);
    const double b = update_q_ucbh(ucb, key, action, reward, next, t, cfg);
    REQUIRE(a == b);  // exact, not approximate
  }
  for (std::uint64_t key = 0; key < 20; ++key)
    for (int a = 0; a < 3; ++a) {
      REQUIRE(eps.q(key, a) == ucb.q(key, a));
      REQUIRE(eps.visits(key, a) == ucb.visits(key, a));
    }
}

TEST_CASE("degenerate task converges to r/(1-gamma)", "[qtable]") {
  TabularAgentConfig cfg = small_config();
  cfg.gamma = 0.9;
  cfg.alpha0 = 1.0;  // pure power-law schedule, capped to the valid range
  SparseQTable table(1);
  for (long long t = 0; t < 100000; ++t) update_q_eps(table, 0, 0, 1.0, 0, t, cfg);
  REQUIRE(table.q(0, 0) == Catch::Approx(10.0).epsilon(0.01));
}

TEST_CASE("visit counts sum to the number of updates", "[qtable]") {
  TabularAgentConfig cfg = small_config();
  SparseQTable table(3);
  Rng rng(8);
  constexpr long long kUpdates = 2000;
  for (long long t = 0; t < kUpdates; ++t)
    update_q_ucbh(table, rng.uniform_int(10), static_cast<int>(rng.uniform_int(3)),
                  rng.uniform01(), rng.uniform_int(10), t, cfg);
  REQUIRE(table.total_visits() == kUpdates);
}

TEST_CASE("table dump/load round-trips", "[qtable]") {
  TabularAgentConfig cfg = small_config();
  SparseQTable table(3);
  Rng rng(12);
  for (long long t = 0; t < 500; ++t)
    update_q_ucbh(table, rng.uniform_int(40), static_cast<int>(rng.uniform_int(3)),
                  rng.uniform(-1.0, 1.0), rng.uniform_int(40), t, cfg);
  std::stringstream ss;
  table.dump(ss);
  SparseQTable loaded(3);
  loaded.load(ss);
  for (std::uint64_t key = 0; key < 40; ++key)
    for (int a = 0; a < 3; ++a) {
      REQUIRE(loaded.q(key, a) == table.q(key, a));
      REQUIRE(loaded.visits(key, a) == table.visits(key, a));
    }
}
