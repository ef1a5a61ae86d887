#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>

#include "mcdp/campaign.hpp"
#include "mcdp/errors.hpp"
#include "mcdp/longitudinal.hpp"
#include "mcdp/sensor.hpp"

using namespace mcdp;

namespace {

const std::filesystem::path kSensors = std::filesystem::path(MCDP_FIXTURES) / "av" / "sensors";

SensorCurves flat(double fp, double fn, double acc) {
  const auto n = canonical_grid().size();
  return {std::vector<double>(n, fp), std::vector<double>(n, fn), std::vector<double>(n, acc)};
}

LongitudinalScenario scenario() {
  LongitudinalScenario s;
  s.sensor = load_sensor(kSensors / "puck.csv");
  s.density = 5;
  s.cruise_kmh = 50;
  s.v_max = 40;
  s.a_max = 3;
  s.a_min = 5;
  s.threshold = 0.5;
  s.control_frequency = 10;
  s.horizon = 30;
  return s;
}

// Odds-form posterior, written independently of the library.
double posterior(double b, double w, double fp, double fn) {
  const double odds = b / (1 - b) * std::pow((1 - fn) / fp, w) * std::pow(fn / (1 - fp), 1 - w);
  return odds / (1 + odds);
}

double phi(double x) { return 0.5 * (1 + std::erf(x / std::sqrt(2.0))); }

}  // namespace

TEST_CASE("braking distance is v^2 / (2 a_min)") {
  CHECK(braking_distance(10, 5) == 10.0);
  CHECK(braking_distance(0, 5) == 0.0);
  CHECK(braking_distance(15.25, 7.5) == Catch::Approx(15.25 * 15.25 / 15.0));
  auto s = scenario();
  const std::vector<double> belief(kBeliefCells, 0.0);
  CHECK(control_step(12, belief, s).d_crit == 12.0 * 12.0 / 10.0);
}

TEST_CASE("control rule boundaries") {
  auto s = scenario();
  s.threshold = 0.5;
  const double v = 10;  // d_crit = 10 m: cells 0..10 count
  std::vector<double> belief(kBeliefCells, 0.0);

  SECTION("integral exactly at the threshold brakes") {
    belief[0] = 0.25;
    belief[10] = 0.25;
    const auto d = control_step(v, belief, s);
    CHECK(d.integral == 0.5);
    CHECK(d.accel == -s.a_min);
  }
  SECTION("mass beyond d_crit does not count") {
    belief[0] = 0.25;
    belief[11] = 0.25;
    const auto d = control_step(v, belief, s);
    CHECK(d.integral == 0.25);
    CHECK(d.accel == s.a_max);
  }
  SECTION("just below the threshold accelerates") {
    belief[10] = std::nextafter(0.5, 0.0);
    CHECK(control_step(v, belief, s).accel == s.a_max);
  }
  SECTION("exactly at cruise speed coasts") {
    const double vc = s.cruise_speed();
    CHECK(control_step(vc, belief, s).accel == 0.0);
    CHECK(control_step(std::nextafter(vc, 0.0), belief, s).accel == s.a_max);
  }
  SECTION("braking wins at cruise speed") {
    belief[0] = 0.5;
    CHECK(control_step(s.cruise_speed(), belief, s).accel == -s.a_min);
  }
}

TEST_CASE("sharp Bayes update matches the hit and miss formulas") {
  const double fp = 0.1;
  const double fn = 0.2;
  const auto curves = flat(fp, fn, 0.0);
  std::vector<double> belief(kBeliefCells, 0.3);
  const auto out = bayes_update(belief, {42.5}, curves);
  for (std::size_t k = 0; k < kBeliefCells; ++k) {
    INFO(k);
    const double d = static_cast<double>(k) + 0.5;
    if (d > canonical_grid().back()) {
      CHECK(out[k] == belief[k]);
      continue;
    }
    // 0.3 * 0.8 / (0.3 * 0.8 + 0.7 * 0.1) = 24/31; miss: 0.06 / (0.06 + 0.63) = 2/23.
    const double expect = k == 42 ? 24.0 / 31.0 : 2.0 / 23.0;
    CHECK(out[k] == Catch::Approx(expect).epsilon(1e-14));
  }
}

TEST_CASE("smeared Bayes update uses geometric mixing") {
  const double fp = 0.05;
  const double fn = 0.3;
  const double sigma = 1.5;
  const auto curves = flat(fp, fn, sigma);
  const double z = 60.3;
  std::vector<double> belief(kBeliefCells, 0.2);
  const auto w = detection_weights(kBeliefCells, {z}, curves);
  const auto out = bayes_update(belief, {z}, curves);
  for (std::size_t k = 0; k < 140; ++k) {
    INFO(k);
    const double wk = std::min(1.0, phi((static_cast<double>(k) + 1 - z) / sigma) - phi((static_cast<double>(k) - z) / sigma));
    CHECK(w[k] == Catch::Approx(wk).margin(1e-12));
    CHECK(out[k] == Catch::Approx(posterior(0.2, w[k], fp, fn)).epsilon(1e-12));
  }
}

TEST_CASE("Bayes update respects offsets and the posterior cap") {
  const auto curves = flat(1e-9, 1e-9, 0.0);
  std::vector<double> belief(kBeliefCells, 0.5);
  // The sensor is 2.5 m into the window: cells 0 and 1 lie behind it.
  const auto out = bayes_update(belief, {7.2}, curves, -2.5);
  CHECK(out[0] == 0.5);
  CHECK(out[1] == 0.5);
  CHECK(out[2] < 0.5);  // partially behind, updated at 0 m
  CHECK(out[9] == Catch::Approx(1.0 - kProbabilityFloor).epsilon(1e-15));
  CHECK(out[9] <= 1.0 - kProbabilityFloor);
  CHECK(out[8] < 1e-5);
}

TEST_CASE("advance_belief shifts and refills with the prior") {
  std::vector<double> b(kBeliefCells);
  for (std::size_t k = 0; k < b.size(); ++k) b[k] = static_cast<double>(k) / 1000;
  const auto a = advance_belief(b, 3, 5);
  CHECK(a[0] == b[3]);
  CHECK(a[kBeliefCells - 4] == b[kBeliefCells - 1]);
  CHECK(a[kBeliefCells - 1] == cell_prior(5));
  CHECK(cell_prior(0) == 0.0);
}

TEST_CASE("an empty road reaches cruise speed and stops once") {
  for (const char* sensor : {"puck.csv", "ace13gm.csv"}) {
    for (double kmh : {30.0, 55.0}) {
      auto s = scenario();
      s.sensor = load_sensor(kSensors / sensor);
      s.density = 0;
      s.cruise_kmh = kmh;
      s.horizon = 60;
      std::vector<EpisodeOutcome> eps;
      for (std::size_t i = 0; i < 5; ++i) eps.push_back(simulate_episode(s, episode_seed(3, i)));
      const auto a = aggregate_outcomes(eps);
      INFO(sensor << " " << kmh);
      CHECK(a.danger == 0.0);
      CHECK(a.collision_rate == 0.0);
      CHECK(std::abs(a.discomfort - 2 * s.cruise_speed()) <= s.a_max / s.control_frequency);
    }
  }
}

TEST_CASE("episodes are reproducible from their seed") {
  const auto s = scenario();
  for (std::size_t i = 0; i < 5; ++i) CHECK(simulate_episode(s, episode_seed(1, i)) == simulate_episode(s, episode_seed(1, i)));
  CHECK(episode_seed(1, 0) != episode_seed(1, 1));
  CHECK(episode_seed(1, 0) != episode_seed(2, 0));
}

TEST_CASE("aggregate_outcomes") {
  CHECK_THROWS_AS(aggregate_outcomes({}), AggregationError);
  std::vector<EpisodeOutcome> eps(4);
  eps[0] = {true, 3000, 10, 8, 0};
  eps[1] = {true, 1000, 20, 6, 0};
  eps[2].discomfort = 30;
  eps[3].discomfort = 40;
  const auto a = aggregate_outcomes(eps);
  CHECK(a.collision_rate == 0.5);
  CHECK(a.danger == 0.5 * 2000);
  CHECK(a.discomfort == 25);
  CHECK(a.achieved_speed == 3.5);
}

TEST_CASE("scenario validation") {
  auto s = scenario();
  s.cruise_kmh = 200;
  CHECK_THROWS_AS(simulate_episode(s, 1), ModelError);
  s = scenario();
  s.threshold = 1;
  CHECK_THROWS_AS(simulate_episode(s, 1), ModelError);
  s = scenario();
  s.control_frequency = 100;
  CHECK_THROWS_AS(simulate_episode(s, 1), ModelError);
}
