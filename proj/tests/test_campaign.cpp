#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "mcdp/campaign.hpp"
#include "mcdp/errors.hpp"

using namespace mcdp;

namespace {

const std::filesystem::path kAv = std::filesystem::path(MCDP_FIXTURES) / "av";

SensorRecord degraded(SensorRecord s) {
  for (auto& x : s.day.fn) x = std::min(1.0, 2 * x + 0.05);
  for (auto& x : s.day.fp) x = std::min(1.0, 3 * x);
  for (auto& x : s.day.acc) x *= 2;
  s.name += " (degraded)";
  return s;
}

Campaign small_campaign() {
  Campaign c;
  c.sensors = {load_sensor(kAv / "sensors" / "puck.csv"), load_sensor(kAv / "sensors" / "os064.csv")};
  c.cruise_kmh = {30, 45};
  c.environments = {{TimeOfDay::Day, 5}};
  c.control_frequencies = {10};
  c.thresholds = {0.5};
  c.dynamics = {{3, 6}};
  c.horizon = 60;
  c.episodes = 6;
  c.seed = 99;
  return c;
}

}  // namespace

TEST_CASE("tables are identical for every job count") {
  const auto c = small_campaign();
  const auto one = longitudinal_table(c, {1, {}, {}});
  for (std::size_t jobs : {2, 3, 8}) {
    const auto many = longitudinal_table(c, {jobs, {}, {}});
    REQUIRE(many.table.rows.size() == one.table.rows.size());
    for (std::size_t i = 0; i < one.table.rows.size(); ++i) {
      CHECK(many.table.rows[i].impl.id == one.table.rows[i].impl.id);
      // Exact bit equality, not tolerance.
      CHECK(many.table.rows[i].prov == one.table.rows[i].prov);
      CHECK(many.table.rows[i].req == one.table.rows[i].req);
    }
  }
  CHECK(!one.table.rows.empty());
  CHECK(one.grid_points == 4);
  CHECK(one.simulated == 4);
}

TEST_CASE("the cache returns the same table") {
  const auto dir = std::filesystem::temp_directory_path() / "mcdp_cache_test";
  std::filesystem::remove_all(dir);
  const auto c = small_campaign();
  const auto first = longitudinal_table(c, {1, dir, {}});
  const auto second = longitudinal_table(c, {1, dir, {}});
  CHECK(first.cache_hits == 0);
  CHECK(second.cache_hits == 4);
  REQUIRE(first.table.rows.size() == second.table.rows.size());
  for (std::size_t i = 0; i < first.table.rows.size(); ++i) CHECK(first.table.rows[i].req == second.table.rows[i].req);
  std::filesystem::remove_all(dir);
}

TEST_CASE("a better sensor is not more dangerous on paired worlds") {
  // N = 500 shared worlds; the mean paired difference in danger must not be
  // negative by more than three standard errors.
  LongitudinalScenario s;
  s.density = 10;
  s.cruise_kmh = 50;
  s.v_max = 40;
  s.a_max = 3;
  s.a_min = 6;
  s.threshold = 0.5;
  s.control_frequency = 10;
  s.horizon = 20;
  const auto good = load_sensor(kAv / "sensors" / "os064.csv");
  const auto bad = degraded(good);
  constexpr std::size_t n = 500;
  double sum = 0;
  double sum2 = 0;
  std::size_t good_hits = 0;
  std::size_t bad_hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto seed = episode_seed(2024, i);
    s.sensor = good;
    const auto g = simulate_episode(s, seed);
    s.sensor = bad;
    const auto b = simulate_episode(s, seed);
    const double d = (b.collided ? b.collision_momentum : 0) - (g.collided ? g.collision_momentum : 0);
    sum += d;
    sum2 += d * d;
    good_hits += g.collided;
    bad_hits += b.collided;
  }
  const double mean = sum / n;
  const double se = std::sqrt(std::max(0.0, sum2 / n - mean * mean) / (n - 1));
  INFO("mean " << mean << " se " << se << " collisions " << good_hits << " vs " << bad_hits);
  CHECK(mean >= -3 * se);
  CHECK(bad_hits > 0);
}

TEST_CASE("campaign files are validated") {
  const auto dir = kAv;
  CHECK_NOTHROW(load_campaign(dir / "campaign_tiny.json"));
  CHECK_THROWS_AS(parse_campaign(R"({"sensors_dir": "sensors"})", dir), Error);
  CHECK_THROWS_AS(parse_campaign(R"({"sensors_dir": "sensors", "sensors": ["No Such"], "cruise_speeds_kmh": [30],
    "environments": [{"time_of_day": "day", "density": 5}], "control_frequencies": [10], "thresholds": [0.5],
    "dynamics": [{"a_max": 3, "a_min": 6}], "horizon_s": 10, "episodes": 2, "seed": 1})",
                                  dir),
                  Error);
}
