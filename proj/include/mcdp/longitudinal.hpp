#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mcdp/dpi.hpp"
#include "mcdp/sensor.hpp"

namespace mcdp {

inline constexpr double kProbabilityFloor = 1e-6;
inline constexpr double kBeliefCell = 1.0;       // m
inline constexpr std::size_t kBeliefCells = 150;  // 0-150 m ahead
inline constexpr double kCollisionSpeed = 0.1;    // m/s; slower crossings are safe stops
inline constexpr double kFeasibleSpeedRatio = 0.95;

struct LongitudinalScenario {
  TimeOfDay time_of_day = TimeOfDay::Day;
  double density = 0;      // obstacles/km
  double cruise_kmh = 0;   // km/h
  double v_max = 0;        // m/s
  double a_max = 0;        // m/s^2
  double a_min = 0;        // m/s^2, braking magnitude
  double threshold = 0.5;  // Theta
  double control_frequency = 10;  // Hz
  SensorRecord sensor;
  double vehicle_mass = 1500;  // kg
  double horizon = 150;        // s
  std::size_t episodes = 1;
  std::uint64_t rng_seed = 0;

  double cruise_speed() const { return cruise_kmh / 3.6; }  // m/s
  void validate() const;
};

struct EpisodeOutcome {
  bool collided = false;
  double collision_momentum = 0;  // kg m/s
  double discomfort = 0;          // m/s
  double mean_speed = 0;          // m/s
  double distance_covered = 0;    // m, at the horizon

  friend bool operator==(const EpisodeOutcome&, const EpisodeOutcome&) = default;
};

// Prior occupancy of one cell of length `cell` for a Poisson process with
// `density` obstacles/km.
double cell_prior(double density, double cell = kBeliefCell);

/// Soft-evidence Bayes update. Cell k covers distances [k, k+1) * cell from
/// the sensor at acquisition time plus `offset` m. Each detection is smeared
/// over the cells by a Gaussian of std ACC(d); the resulting weight w in
/// [0, 1] multiplies the odds of occupancy by
///   ((1 - FN) / FP)^w * (FN / (1 - FP))^(1 - w)
/// so w = 1 is a hit and w = 0 a miss. FP and FN are clamped to
/// [1e-6, 1 - 1e-6] and the posterior to at most 1 - 1e-6. Cells beyond the
/// curve grid and cells wholly behind the sensor are not observed.
std::vector<double> bayes_update(const std::vector<double>& belief, const std::vector<double>& detections,
                                 const SensorCurves& curves, double offset = 0.0, double cell = kBeliefCell);

// Per-cell evidence weight used by bayes_update.
std::vector<double> detection_weights(std::size_t cells, const std::vector<double>& detections,
                                      const SensorCurves& curves, double offset = 0.0, double cell = kBeliefCell);

// Moves the belief window `shift` cells forward; new far cells take the prior.
std::vector<double> advance_belief(const std::vector<double>& belief, std::size_t shift, double density);

struct ControlDecision {
  double accel = 0;     // one of -a_min, +a_max, 0
  double d_crit = 0;    // m
  double integral = 0;  // belief mass within d_crit
};

double braking_distance(double v, double a_min);

/// Algorithm 1: brake if the belief mass of cells whose near edge lies within
/// d_crit = v^2 / (2 a_min) reaches Theta; otherwise accelerate below the
/// cruise speed and coast at it.
ControlDecision control_step(double v, const std::vector<double>& belief, const LongitudinalScenario& s);

EpisodeOutcome simulate_episode(const LongitudinalScenario& s, std::uint64_t seed);

struct Aggregate {
  double danger = 0;          // kg m/s
  double discomfort = 0;      // m/s
  double achieved_speed = 0;  // m/s
  double collision_rate = 0;
};

// Danger = collision fraction x mean collision momentum (momentum already
// includes the vehicle mass). Throws AggregationError on an empty list.
Aggregate aggregate_outcomes(const std::vector<EpisodeOutcome>& outcomes);

// Seed of episode i of a campaign; shared by every grid point so that
// scenarios are compared on the same worlds.
std::uint64_t episode_seed(std::uint64_t base, std::size_t episode);

}  // namespace mcdp
