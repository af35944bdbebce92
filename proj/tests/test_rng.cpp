#include <catch2/catch_amalgamated.hpp>

#include "cuavsim/rng.hpp"

using cuavsim::Rng;

TEST_CASE("rng streams are reproducible", "[rng]") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u64() == b.next_u64());
}

TEST_CASE("derived streams differ per path", "[rng]") {
  Rng base = Rng::derive(7, {0, cuavsim::kStreamEnv});
  Rng other_rep = Rng::derive(7, {1, cuavsim::kStreamEnv});
  Rng other_purpose = Rng::derive(7, {0, cuavsim::kStreamScenario});
  const auto x = base.next_u64();
  REQUIRE(x != other_rep.next_u64());
  REQUIRE(x != other_purpose.next_u64());
}

TEST_CASE("uniform01 stays in [0,1) and is roughly uniform", "[rng]") {
  Rng rng(123);
  double sum = 0.0;
  constexpr int kDraws = 100000;
  for (int i = 0; i < kDraws; ++i) {
    const double u = rng.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  REQUIRE(sum / kDraws == Catch::Approx(0.5).margin(0.005));
}

TEST_CASE("uniform_int is unbiased over small ranges", "[rng]") {
  Rng rng(99);
  constexpr int kDraws = 120000;
  int counts[6] = {0};
  for (int i = 0; i < kDraws; ++i) ++counts[rng.uniform_int(6)];
  for (int c : counts)
    REQUIRE(static_cast<double>(c) / kDraws == Catch::Approx(1.0 / 6).margin(0.01));
}

TEST_CASE("bernoulli matches its probability", "[rng]") {
  Rng rng(5);
  int hits = 0;
  constexpr int kDraws = 100000;
  for (int i = 0; i < kDraws; ++i) hits += rng.bernoulli(0.3) ? 1 : 0;
  REQUIRE(static_cast<double>(hits) / kDraws == Catch::Approx(0.3).margin(0.01));
}
