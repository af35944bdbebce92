#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cuavsim/experiment.hpp"
#include "cuavsim/svg.hpp"

using namespace cuavsim;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  REQUIRE(is);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

int count_occurrences(const std::string& text, const std::string& needle) {
  int n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1))
    ++n;
  return n;
}

ExperimentConfig tiny_config(const std::string& out_dir, Algorithm algo, long long slots = 60) {
  ExperimentConfig cfg;
  cfg.name = "tiny";
  cfg.algorithm = algo;
  cfg.total_slots = slots;
  cfg.seed = 7;
  cfg.replications = 2;
  cfg.output_dir = out_dir;
  cfg.n_agents = 2;
  cfg.n_channels = 2;
  cfg.ddqn.hidden = {6, 6};
  cfg.ddqn.batch = 8;
  cfg.ddqn.train_start = 8;
  cfg.ddqn.capacity = 64;
  return cfg;
}

fs::path temp_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("cuavsim_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("scenario build respects overrides and draw determinism", "[experiment]") {
  ExperimentConfig cfg = tiny_config("unused", Algorithm::kIlQEps);
  cfg.channel_overrides.resize(2);
  cfg.channel_overrides[1].alpha = 0.125;
  Rng a = Rng::derive(cfg.seed, {0, kStreamScenario});
  Rng b = Rng::derive(cfg.seed, {0, kStreamScenario});
  const auto net1 = build_network_config(cfg, a);
  const auto net2 = build_network_config(cfg, b);
  REQUIRE(net1.channels[0].alpha == net2.channels[0].alpha);
  REQUIRE(net1.gains_self == net2.gains_self);
  REQUIRE(net1.channels[1].alpha == 0.125);
  for (double g : net1.gains_self) {
    REQUIRE(g >= std::pow(10.0, -8.0));
    REQUIRE(g <= std::pow(10.0, -6.0));
  }
}

TEST_CASE("runs are deterministic and replication-independent", "[experiment]") {
  const auto dir1 = temp_dir("det1");
  const auto dir2 = temp_dir("det2");
  const auto dir3 = temp_dir("det3");

  auto cfg1 = tiny_config(dir1.string(), Algorithm::kIlQUcbh);
  auto cfg2 = tiny_config(dir2.string(), Algorithm::kIlQUcbh);
  const auto sum1 = run_experiment(cfg1);
  const auto sum2 = run_experiment(cfg2);
  REQUIRE(sum1.csv_paths.size() == 2);
  for (std::size_t i = 0; i < sum1.csv_paths.size(); ++i)
    REQUIRE(slurp(sum1.csv_paths[i]) == slurp(sum2.csv_paths[i]));

  // replication 0 must not depend on the existence of replication 1
  auto cfg3 = tiny_config(dir3.string(), Algorithm::kIlQUcbh);
  cfg3.replications = 1;
  const auto sum3 = run_experiment(cfg3);
  REQUIRE(slurp(sum3.csv_paths[0]) == slurp(sum1.csv_paths[0]));
}

TEST_CASE("csv output has the documented shape", "[experiment]") {
  const auto dir = temp_dir("csv");
  auto cfg = tiny_config(dir.string(), Algorithm::kIlQEps, 1);
  cfg.replications = 1;
  const auto summary = run_experiment(cfg);
  const auto text = slurp(summary.csv_paths[0]);
  REQUIRE(count_occurrences(text, "\n") == 2);  // header + one data row
  REQUIRE(text.rfind("slot,avg_reward,avg_reward_ma,sensing_accuracy,channel_utilization\n", 0) ==
          0);

  const auto table = read_csv(summary.csv_paths[0]);
  REQUIRE(table.n_rows() == 1);
  REQUIRE(table.column("slot")[0] == 0.0);
}

TEST_CASE("write_csv handles empty and tiny series deterministically", "[experiment]") {
  const auto dir = temp_dir("wcsv");
  const auto path = (dir / "x.csv").string();
  write_csv({}, 10, path);
  REQUIRE(slurp(path) == "slot,avg_reward,avg_reward_ma,sensing_accuracy,channel_utilization\n");

  std::vector<SlotMetrics> series(3);
  for (int i = 0; i < 3; ++i) {
    series[i].slot = i;
    series[i].avg_reward = i * 0.5;
    series[i].sensing_accuracy = 50.0;
    series[i].channel_utilization = 25.0;
  }
  write_csv(series, 2, path);
  const auto first = slurp(path);
  REQUIRE(count_occurrences(first, "\n") == 4);
  write_csv(series, 2, path);
  REQUIRE(slurp(path) == first);
}

TEST_CASE("ddqn experiments run end to end deterministically", "[experiment]") {
  const auto dir1 = temp_dir("ddqn1");
  const auto dir2 = temp_dir("ddqn2");
  auto cfg1 = tiny_config(dir1.string(), Algorithm::kIlDdqnUcbh, 40);
  cfg1.replications = 1;
  auto cfg2 = tiny_config(dir2.string(), Algorithm::kIlDdqnUcbh, 40);
  cfg2.replications = 1;
  const auto s1 = run_experiment(cfg1);
  const auto s2 = run_experiment(cfg2);
  REQUIRE(slurp(s1.csv_paths[0]) == slurp(s2.csv_paths[0]));
}

TEST_CASE("single-value sweeps reproduce the plain experiment", "[experiment]") {
  const auto dir = temp_dir("sweep");
  auto base = tiny_config(dir.string(), Algorithm::kIlQEps);
  base.replications = 1;
  const auto swept = run_sweep(base, "bandwidth", {70e6});
  REQUIRE(swept.size() == 1);

  auto pinned = base;
  pinned.bandwidth_choices = {70e6};
  pinned.name = base.name + "_bandwidth_7e_07";
  const auto direct = run_experiment(pinned);
  REQUIRE(swept[0].final_reward == direct.final_reward);

  const auto sweep_csv = (dir / "tiny_sweep_bandwidth.csv").string();
  REQUIRE(fs::exists(sweep_csv));
  REQUIRE_THROWS_AS(run_sweep(base, "bandwidth", {}), std::invalid_argument);
  REQUIRE_THROWS_AS(run_sweep(base, "p_detect", {0.5}), std::invalid_argument);
}

TEST_CASE("transition sweeps pin alpha and beta", "[experiment]") {
  auto base = tiny_config("unused", Algorithm::kIlQEps);
  const auto cfg = apply_sweep_value(base, "transition_prob", 0.3);
  Rng rng = Rng::derive(cfg.seed, {0, kStreamScenario});
  const auto net = build_network_config(cfg, rng);
  for (const auto& ch : net.channels) {
    REQUIRE(ch.alpha == 0.3);
    REQUIRE(ch.beta == 0.3);
  }
}

TEST_CASE("emit_plot draws one polyline per non-empty csv", "[experiment]") {
  const auto dir = temp_dir("plot");
  std::vector<SlotMetrics> series(5);
  for (int i = 0; i < 5; ++i) {
    series[i].slot = i;
    series[i].avg_reward = i;
    series[i].sensing_accuracy = 10.0 * i;
    series[i].channel_utilization = 5.0 * i;
  }
  const auto csv1 = (dir / "a.csv").string();
  const auto csv2 = (dir / "b.csv").string();
  const auto empty_csv = (dir / "empty.csv").string();
  write_csv(series, 2, csv1);
  write_csv(series, 3, csv2);
  write_csv({}, 2, empty_csv);

  const auto svg1 = (dir / "one.svg").string();
  emit_plot({csv1}, svg1);
  REQUIRE(count_occurrences(slurp(svg1), "<polyline") == 1);

  const auto svg2 = (dir / "two.svg").string();
  emit_plot({csv1, csv2}, svg2);
  const auto text2 = slurp(svg2);
  REQUIRE(count_occurrences(text2, "<polyline") == 2);
  REQUIRE(count_occurrences(text2, "<text") >= 2);
  REQUIRE(text2.find(">a<") != std::string::npos);
  REQUIRE(text2.find(">b<") != std::string::npos);

  const auto svg3 = (dir / "none.svg").string();
  emit_plot({empty_csv}, svg3);
  REQUIRE(count_occurrences(slurp(svg3), "<polyline") == 0);

  REQUIRE_THROWS_AS(emit_plot({csv1}, svg1, "no_such_metric"), std::out_of_range);
}

TEST_CASE("summary aggregates per-replication tails", "[experiment]") {
  const auto dir = temp_dir("summary");
  auto cfg = tiny_config(dir.string(), Algorithm::kIlQEps, 30);
  const auto summary = run_experiment(cfg);
  REQUIRE(summary.final_reward.size() == 2);
  REQUIRE(summary.final_accuracy.size() == 2);
  REQUIRE(summary.final_utilization.size() == 2);
  const double expect_mean = (summary.final_reward[0] + summary.final_reward[1]) / 2.0;
  REQUIRE(summary.mean_reward == Catch::Approx(expect_mean));
  REQUIRE(fs::exists(summary.summary_path));
  const auto text = slurp(summary.summary_path);
  REQUIRE(text.find("algorithm il_q_eps") != std::string::npos);
  REQUIRE(text.find("wall_seconds") != std::string::npos);
}
