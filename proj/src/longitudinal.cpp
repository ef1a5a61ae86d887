#include "mcdp/longitudinal.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>

#include "mcdp/errors.hpp"

namespace mcdp {

namespace {

constexpr double kObstacleActive = 2.0;  // s a darting obstacle stays on the road
constexpr double kTriggerNear = 20.0;    // m
constexpr double kTriggerFar = 120.0;    // m
constexpr double kRoadFactor = 1.2;

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Fixed consumption of the generator keeps runs bit-identical and couples
// paired runs that only differ in sensor quality.
struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double uniform() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
};

// Curves live on the canonical grid (0, 10, ..., 150 m), so a sample is a
// direct index instead of a search.
double grid_sample(const std::vector<double>& v, double d) {
  constexpr double kStep = 10.0;
  if (d <= 0) return v.front();
  const double u = d / kStep;
  const auto i = static_cast<std::size_t>(u);
  if (i + 1 >= v.size()) return v.back();
  if (std::isinf(v[i]) || std::isinf(v[i + 1])) return INFINITY;
  return v[i] + (u - static_cast<double>(i)) * (v[i + 1] - v[i]);
}

double clamp_prob(double p) { return std::clamp(p, kProbabilityFloor, 1.0 - kProbabilityFloor); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

struct Obstacle {
  double position = 0;
  double trigger = 0;
  double active_from = -1;  // s, < 0 while not yet triggered
  bool removed = false;

  bool active(double t) const { return !removed && active_from >= 0 && t < active_from + kObstacleActive; }
};

struct Reading {
  double position = 0;  // vehicle position at acquisition
  std::size_t deliver_tick = 0;
  std::vector<double> detections;
};

// Speed when reaching `o` while moving from x0 at v0 with acceleration a for
// `tau` s and then at constant speed.
double speed_at(double o, double x0, double v0, double a, double tau) {
  const double x_tau = x0 + v0 * tau + 0.5 * a * tau * tau;
  if (o >= x_tau) return v0 + a * tau;
  return std::sqrt(std::max(0.0, v0 * v0 + 2.0 * a * (o - x0)));
}

}  // namespace

void LongitudinalScenario::validate() const {
  if (!(density >= 0)) throw ModelError("obstacle density must be >= 0");
  if (!(cruise_speed() > 0 && cruise_speed() <= v_max + 1e-12))
    throw ModelError("cruise speed must satisfy 0 < v_cruise <= v_max");
  if (!(a_max > 0 && a_min > 0)) throw ModelError("a_max and a_min must be > 0");
  if (!(threshold > 0 && threshold < 1)) throw ModelError("threshold must lie in (0, 1)");
  if (!(control_frequency >= 1.0 && control_frequency <= 50.0))
    throw ModelError("control frequency must lie in [1, 50] Hz");
  if (!(sensor.frequency > 0)) throw ModelError("sensor frequency must be > 0");
  if (!(sensor.latency >= 0)) throw ModelError("sensor latency must be >= 0");
  if (!(vehicle_mass > 0)) throw ModelError("vehicle mass must be > 0");
  if (!(horizon > 0)) throw ModelError("horizon must be > 0");
}

double cell_prior(double density, double cell) { return 1.0 - std::exp(-density / 1000.0 * cell); }

std::vector<double> detection_weights(std::size_t cells, const std::vector<double>& detections,
                                      const SensorCurves& curves, double offset, double cell) {
  std::vector<double> w(cells, 0.0);
  const double n = static_cast<double>(cells);
  for (double z : detections) {
    const double sigma = grid_sample(curves.acc, std::max(z, 0.0));
    if (std::isinf(sigma)) continue;
    if (sigma <= 1e-12) {
      const double k = std::floor((z - offset) / cell);
      if (k >= 0 && k < n) w[static_cast<std::size_t>(k)] += 1.0;
      continue;
    }
    // Only cells within 8 sigma get mass; neighbours share a cdf boundary.
    const double k0 = std::max(0.0, std::floor((z - 8 * sigma - offset) / cell));
    const double k1 = std::min(n - 1, std::floor((z + 8 * sigma - offset) / cell));
    if (k0 > k1) continue;
    double cdf_lo = normal_cdf((offset + k0 * cell - z) / sigma);
    for (auto k = static_cast<std::size_t>(k0); k <= static_cast<std::size_t>(k1); ++k) {
      const double cdf_hi = normal_cdf((offset + static_cast<double>(k + 1) * cell - z) / sigma);
      w[k] += cdf_hi - cdf_lo;
      cdf_lo = cdf_hi;
    }
  }
  for (auto& x : w) x = std::min(x, 1.0);
  return w;
}

std::vector<double> bayes_update(const std::vector<double>& belief, const std::vector<double>& detections,
                                 const SensorCurves& curves, double offset, double cell) {
  const auto& grid = canonical_grid();
  const auto w = detection_weights(belief.size(), detections, curves, offset, cell);
  std::vector<double> out = belief;
  for (std::size_t k = 0; k < belief.size(); ++k) {
    // Cells wholly behind the sensor are not observed; the one it sits in
    // uses the curves at 0 m.
    if (offset + static_cast<double>(k + 1) * cell <= 0) continue;
    const double d = std::max(0.0, offset + (static_cast<double>(k) + 0.5) * cell);
    if (d > grid.back()) continue;
    const double fp = clamp_prob(grid_sample(curves.fp, d));
    const double fn = clamp_prob(grid_sample(curves.fn, d));
    // A detection smeared with weight w multiplies the odds by
    // ((1-fn)/fp)^w * (fn/(1-fp))^(1-w); w = 1 and w = 0 are the hit and miss
    // updates.
    double l1 = fn;
    double l0 = 1 - fp;
    if (w[k] == 1.0) {
      l1 = 1 - fn;
      l0 = fp;
    } else if (w[k] > 0.0) {
      l1 = std::exp(w[k] * std::log((1 - fn) / fp) + (1 - w[k]) * std::log(fn / (1 - fp)));
      l0 = 1.0;
    }
    const double num = belief[k] * l1;
    const double den = num + (1 - belief[k]) * l0;
    // Certainty is never reached, so a cleared obstacle can be forgotten.
    out[k] = std::min(den > 0 ? num / den : belief[k], 1.0 - kProbabilityFloor);
  }
  return out;
}

std::vector<double> advance_belief(const std::vector<double>& belief, std::size_t shift, double density) {
  std::vector<double> out(belief.size(), cell_prior(density));
  for (std::size_t k = shift; k < belief.size(); ++k) out[k - shift] = belief[k];
  return out;
}

double braking_distance(double v, double a_min) { return v * v / (2.0 * a_min); }

ControlDecision control_step(double v, const std::vector<double>& belief, const LongitudinalScenario& s) {
  ControlDecision d;
  d.d_crit = braking_distance(v, s.a_min);
  for (std::size_t k = 0; k < belief.size(); ++k) {
    if (static_cast<double>(k) * kBeliefCell > d.d_crit) break;
    d.integral += belief[k];
  }
  if (d.integral >= s.threshold)
    d.accel = -s.a_min;
  else if (v < s.cruise_speed())
    d.accel = s.a_max;
  else
    d.accel = 0.0;
  return d;
}

std::uint64_t episode_seed(std::uint64_t base, std::size_t episode) {
  return splitmix(base ^ splitmix(static_cast<std::uint64_t>(episode) + 0x5151));
}

EpisodeOutcome simulate_episode(const LongitudinalScenario& s, std::uint64_t seed) {
  s.validate();
  Rng world(splitmix(seed ^ 0x77));
  Rng sense(splitmix(seed ^ 0x99));
  const double v_cs = s.cruise_speed();
  const double dt = 1.0 / s.control_frequency;
  const auto ticks = static_cast<std::size_t>(std::llround(s.horizon * s.control_frequency));
  const auto delay = static_cast<std::size_t>(std::ceil(s.sensor.latency * s.control_frequency - 1e-9));
  const auto& curves = s.sensor.curves(s.time_of_day);
  const auto& grid = canonical_grid();
  const double range = grid.back();

  // Spatial Poisson process on the road ahead.
  std::vector<Obstacle> obstacles;
  const double road = kRoadFactor * v_cs * s.horizon;
  if (s.density > 0) {
    const double rate = s.density / 1000.0;
    double pos = 0;
    while (true) {
      pos += -std::log(1.0 - world.uniform()) / rate;
      if (pos > road) break;
      obstacles.push_back({pos, kTriggerNear + (kTriggerFar - kTriggerNear) * world.uniform()});
    }
  }

  std::vector<double> fp_cell(kBeliefCells);
  for (std::size_t k = 0; k < kBeliefCells; ++k)
    fp_cell[k] = grid_sample(curves.fp, (static_cast<double>(k) + 0.5) * kBeliefCell);

  const double prior = cell_prior(s.density);
  std::vector<double> belief(kBeliefCells, prior);
  long base = 0;  // world cell index of belief[0]
  std::deque<Reading> fifo;
  std::size_t acquired = 0;

  double x = 0;
  double v = 0;
  EpisodeOutcome out;

  for (std::size_t i = 0; i < ticks; ++i) {
    const double t = static_cast<double>(i) * dt;

    for (auto& o : obstacles)
      if (!o.removed && o.active_from < 0 && o.position - x <= o.trigger) o.active_from = t;

    // Acquisitions due by now, generated from ground truth.
    while (static_cast<double>(acquired) / s.sensor.frequency <= t + 1e-12) {
      ++acquired;
      Reading r;
      r.position = x;
      r.deliver_tick = i + delay;
      for (const auto& o : obstacles) {
        const double d = o.position - x;
        if (!o.active(t) || d < 0 || d > range) continue;
        const double u = sense.uniform();
        const double noise = sense.normal();
        if (u < 1.0 - grid_sample(curves.fn, d)) {
          const double sigma = grid_sample(curves.acc, d);
          r.detections.push_back(std::isinf(sigma) ? d : d + sigma * noise);
        }
      }
      for (std::size_t k = 0; k < kBeliefCells; ++k) {
        const double u = sense.uniform();
        const double jitter = sense.uniform();
        if (u < fp_cell[k]) r.detections.push_back((static_cast<double>(k) + jitter) * kBeliefCell);
      }
      fifo.push_back(std::move(r));
    }

    while (!fifo.empty() && fifo.front().deliver_tick <= i) {
      const Reading& r = fifo.front();
      // Obstacles appear at any time: every cell may turn occupied between
      // readings with the prior probability.
      for (auto& b : belief) b += (1 - b) * prior;
      belief = bayes_update(belief, r.detections, curves, static_cast<double>(base) * kBeliefCell - r.position);
      fifo.pop_front();
    }

    // Decide on the belief seen from where the vehicle will be after this
    // tick; mass that falls behind that point is folded into the first cell.
    const double x_look = x + v * dt;
    const long look = static_cast<long>(std::floor(x_look / kBeliefCell));
    std::vector<double> ahead(kBeliefCells, prior);
    ahead[0] = 0.0;
    for (std::size_t k = 0; k < kBeliefCells; ++k) {
      const long rel = base + static_cast<long>(k) - look;
      if (rel <= 0)
        ahead[0] += belief[k];
      else if (rel < static_cast<long>(kBeliefCells))
        ahead[static_cast<std::size_t>(rel)] = belief[k];
    }
    const ControlDecision dec = control_step(v, ahead, s);

    // Exact kinematics for piecewise-constant acceleration.
    const double a = dec.accel;
    double tau = dt;  // duration of the accelerated part of the tick
    double v1 = v;
    if (a > 0) {
      if ((v_cs - v) / a < dt) {
        tau = std::max(0.0, (v_cs - v) / a);
        v1 = v_cs;
      } else {
        v1 = v + a * dt;
      }
    } else if (a < 0) {
      if (v / -a < dt) {
        tau = v / -a;
        v1 = 0.0;
      } else {
        v1 = v + a * dt;
      }
    }
    const double x1 = x + v * tau + 0.5 * a * tau * tau + v1 * (dt - tau);
    out.discomfort += std::abs(v1 - v);

    for (auto& o : obstacles) {
      if (!o.active(t) || o.position <= x || o.position > x1) continue;
      const double vo = speed_at(o.position, x, v, a, tau);
      if (vo > kCollisionSpeed && !out.collided) {
        out.collided = true;
        out.collision_momentum = s.vehicle_mass * vo;
      }
      if (vo > kCollisionSpeed) o.removed = true;
    }

    x = x1;
    v = v1;
    const long new_base = static_cast<long>(std::floor(x / kBeliefCell));
    if (new_base > base) {
      belief = advance_belief(belief, static_cast<std::size_t>(new_base - base), s.density);
      base = new_base;
    }
  }

  out.distance_covered = x;
  out.mean_speed = x / s.horizon;
  out.discomfort += v;  // terminal stop after the horizon
  return out;
}

Aggregate aggregate_outcomes(const std::vector<EpisodeOutcome>& outcomes) {
  if (outcomes.empty()) throw AggregationError("cannot aggregate an empty list of episodes");
  Aggregate a;
  std::size_t hits = 0;
  double momentum = 0;
  for (const auto& o : outcomes) {
    if (o.collided) {
      ++hits;
      momentum += o.collision_momentum;
    }
    a.discomfort += o.discomfort;
    a.achieved_speed += o.mean_speed;
  }
  const double n = static_cast<double>(outcomes.size());
  a.collision_rate = static_cast<double>(hits) / n;
  a.danger = hits ? a.collision_rate * (momentum / static_cast<double>(hits)) : 0.0;
  a.discomfort /= n;
  a.achieved_speed /= n;
  return a;
}

}  // namespace mcdp
