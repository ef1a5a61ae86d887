#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "mcdp/errors.hpp"
#include "mcdp/lateral.hpp"

using namespace mcdp;

namespace {

struct McResult {
  double j_track = 0;
  double j_eff = 0;
};

// Runs the physical loop step by step: measure, filter, act, propagate.
// Only the gains and the discrete model are taken from the library.
McResult monte_carlo(const LateralParams& p, std::size_t steps, std::uint64_t seed) {
  const LateralLoop m = build_lateral_loop(p);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01;
  const Eigen::Matrix2d lw = m.W.llt().matrixL();
  const Eigen::Matrix2d lv = m.V.llt().matrixL();
  Eigen::Vector2d x = Eigen::Vector2d::Zero();
  Eigen::Vector2d prior = Eigen::Vector2d::Zero();
  const std::size_t burn = 20'000;
  double track = 0;
  double eff = 0;
  for (std::size_t i = 0; i < burn + steps; ++i) {
    const Eigen::Vector2d v = lv * Eigen::Vector2d(n01(rng), n01(rng));
    const Eigen::Vector2d w = lw * Eigen::Vector2d(n01(rng), n01(rng));
    const Eigen::Vector2d post = prior + m.L * (x + v - prior);
    const double tau = -(m.K * post)(0);
    if (i >= burn) {
      track += x.dot(p.q0 * x);
      eff += p.r0 * tau * tau;
    }
    x = m.A * x + m.B * tau + w;
    prior = m.A * post + m.B * tau;
  }
  return {track / static_cast<double>(steps), eff / static_cast<double>(steps)};
}

LateralParams params(double alpha, double prec, double fo, double fc, double noise) {
  LateralParams p;
  p.speed = 15.28;
  p.alpha = alpha;
  p.obs_precision = prec;
  p.obs_frequency = fo;
  p.ctrl_frequency = fc;
  p.w_theta *= noise;
  p.w_y *= noise;
  return p;
}

}  // namespace

TEST_CASE("stationary costs agree with a long Monte Carlo run") {
  const std::vector<LateralParams> sets{
      params(1, 0.1, 10, 10, 1),   params(0.5, 0.02, 30, 50, 0.6), params(4, 0.2, 10, 20, 1.5),
      params(2, 0.05, 20, 20, 1.2), params(1, 0.1, 30, 10, 0.8),
  };
  std::uint64_t seed = 1;
  for (const auto& p : sets) {
    const auto exact = solve_lqg_lateral(p);
    const auto mc = monte_carlo(p, 1'000'000, seed++);
    INFO("alpha " << p.alpha << " prec " << p.obs_precision << " fo " << p.obs_frequency << " fc " << p.ctrl_frequency);
    INFO("J_track " << exact.j_track << " vs " << mc.j_track << ", J_eff " << exact.j_eff << " vs " << mc.j_eff);
    CHECK(std::abs(mc.j_track - exact.j_track) <= 0.05 * exact.j_track);
    CHECK(std::abs(mc.j_eff - exact.j_eff) <= 0.05 * exact.j_eff);
  }
}

TEST_CASE("alpha trades tracking for effort") {
  for (double prec : {0.02, 0.2}) {
    LateralOutcome prev{INFINITY, 0};
    for (double a : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
      const auto o = solve_lqg_lateral(params(a, prec, 20, 20, 1));
      INFO("alpha " << a);
      CHECK(o.j_track < prev.j_track);
      CHECK(o.j_eff > prev.j_eff);
      prev = o;
    }
  }
}

TEST_CASE("better sensing lowers both costs") {
  const auto fine = solve_lqg_lateral(params(1, 0.02, 30, 20, 1));
  const auto coarse = solve_lqg_lateral(params(1, 0.2, 10, 20, 1));
  CHECK(fine.j_track < coarse.j_track);
}

TEST_CASE("discrete model matches the continuous dynamics") {
  const auto p = params(1, 0.1, 10, 10, 1);
  const auto m = build_lateral_loop(p);
  const double dt = 0.1;
  CHECK(m.A(1, 0) == Catch::Approx(p.speed * dt));
  CHECK(m.B(0) == Catch::Approx(p.gain * dt));
  CHECK(m.B(1) == Catch::Approx(p.speed * p.gain * dt * dt / 2));
  CHECK(m.W(0, 0) == Catch::Approx(p.w_theta * dt));
  CHECK(m.control_iterations > 0);
  CHECK(m.filter_iterations > 0);
}

TEST_CASE("invalid lateral parameters") {
  auto p = params(1, 0.1, 10, 10, 1);
  p.alpha = 0;
  CHECK_THROWS_AS(solve_lqg_lateral(p), ModelError);
  p = params(1, 0.1, 10, 10, 1);
  p.gain = 0;
  CHECK_THROWS_AS(solve_lqg_lateral(p), ModelError);
  p = params(1, INFINITY, 10, 10, 1);
  CHECK_THROWS_AS(solve_lqg_lateral(p), ModelError);
}

TEST_CASE("lateral table has one row per grid point") {
  LateralGrid g{{0.5, 2}, {0.05, 0.1}, {10}, {10, 20}, {1, 1.5}};
  LateralReport report;
  const auto d = lateral_control_dpi(g, params(1, 0.1, 10, 10, 1), &report);
  CHECK(d->implementations().size() == 16);
  CHECK(report.dropped.empty());
  // More noise never needs fewer resources: h is monotone.
  const auto low = d->eval_h(Element::tuple({1.0}));
  const auto high = d->eval_h(Element::tuple({1.5}));
  for (const auto& r : high.points) CHECK(low.antichain().upper_contains(r));
  CHECK_THROWS_AS(lateral_control_dpi({{}, {0.1}, {10}, {10}, {1}}, params(1, 0.1, 10, 10, 1)), ModelError);
}
