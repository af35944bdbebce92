#include <catch2/catch_amalgamated.hpp>

#include "cuavsim/metrics.hpp"
#include "test_util.hpp"

using namespace cuavsim;

TEST_CASE("average reward", "[metrics]") {
  REQUIRE(average_reward({1, 2, 3}) == Catch::Approx(2.0));
  REQUIRE(average_reward({0, 0, 0}) == 0.0);
  REQUIRE(average_reward({-5, 5}) == 0.0);
  REQUIRE_THROWS_AS(average_reward({}), std::invalid_argument);
}

TEST_CASE("sensing accuracy counts sensed-and-correct channels over M", "[metrics]") {
  SlotOutcome out;
  out.truth = {1, 0, 1, 0, 1};
  out.fusion = {1, 0, 1, 0, 1};
  REQUIRE(sensing_accuracy(out, 5) == 100.0);

  out.fusion = {-1, -1, -1, -1, -1};
  REQUIRE(sensing_accuracy(out, 5) == 0.0);

  // 3 sensed correctly, 1 sensed wrongly, 1 unsensed
  out.fusion = {1, 0, 1, 1, -1};
  REQUIRE(sensing_accuracy(out, 5) == Catch::Approx(60.0));
}

TEST_CASE("perfect sensors on distinct channels hit the coverage bound", "[metrics]") {
  auto net = test::flat_network(3, 5);
  for (auto& ch : net.channels) {
    ch.p_detect = 1.0;
    ch.p_false_alarm = 0.0;
  }
  Environment env(net, Rng(4));
  const auto out = env.step(JointAction{{1, 2, 3}});
  REQUIRE(sensing_accuracy(out, 5) == Catch::Approx(100.0 * 3 / 5));
}

TEST_CASE("channel utilization counts distinct selected channels", "[metrics]") {
  REQUIRE(channel_utilization(JointAction{{0, 0, 0}}, 5) == 0.0);
  REQUIRE(channel_utilization(JointAction{{1, 1, 3}}, 5) == Catch::Approx(40.0));
  REQUIRE(channel_utilization(JointAction{{1, 2, 3, 4, 5}}, 5) == 100.0);
}

TEST_CASE("moving average smooths with a trailing window", "[metrics]") {
  REQUIRE(moving_average({3, 1, 4}, 1) == std::vector<double>{3, 1, 4});
  REQUIRE(moving_average({0, 2}, 2) == std::vector<double>{0, 1});
  const std::vector<double> constant(100, 2.5);
  REQUIRE(moving_average(constant, 7) == constant);
  REQUIRE(moving_average({1, 2, 3, 4}, 2).size() == 4);
  REQUIRE_THROWS_AS(moving_average({1.0}, 0), std::invalid_argument);
}
