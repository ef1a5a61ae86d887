#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mcdp/dpi.hpp"

namespace mcdp {

/// Lateral dynamics x = (theta, y):
///   theta' = c tau + w_theta,   y' = v theta + w_y
/// with both states observed at obs_frequency through noise of std-dev
/// obs_precision (m for y, obs_precision * angle_ratio rad for theta).
struct LateralParams {
  double speed = 15;           // m/s
  double gain = 0.5;           // c, rad/(s N m)
  double w_theta = 0.01;       // rad^2/s
  double w_y = 0.01;           // m^2/s
  Eigen::Matrix2d q0 = Eigen::Matrix2d::Identity();
  double r0 = 1;
  double alpha = 1;
  double obs_precision = 0.1;  // m
  double angle_ratio = 0.1;    // rad per m of obs_precision
  double obs_frequency = 10;   // Hz
  double ctrl_frequency = 10;  // Hz

  void validate() const;
};

struct LateralOutcome {
  double j_track = 0;  // lim E{x' Q0 x}
  double j_eff = 0;    // lim E{r0 tau^2}
};

/// The sampled closed loop used to evaluate a parameter set. The state is
/// z = (x, prior estimate); z' = F z + Gw w + Gv v with w ~ N(0, W),
/// v ~ N(0, V) and tau = H z + Hv v.
struct LateralLoop {
  Eigen::Matrix2d A, W, V, Qd;
  Eigen::Vector2d B;
  double Rd = 0;
  Eigen::RowVector2d K;  // control gain on the current estimate
  Eigen::Matrix2d L;     // Kalman gain
  Eigen::Matrix4d F;
  Eigen::Matrix<double, 4, 2> Gw, Gv;
  Eigen::RowVector4d H;
  Eigen::RowVector2d Hv;
  Eigen::Matrix4d Z;  // stationary covariance of z
  std::size_t control_iterations = 0;
  std::size_t filter_iterations = 0;
};

inline constexpr double kRiccatiTolerance = 1e-10;
inline constexpr std::size_t kRiccatiMaxIter = 100'000;

LateralLoop build_lateral_loop(const LateralParams& p);
LateralOutcome solve_lqg_lateral(const LateralParams& p);

struct LateralGrid {
  std::vector<double> alpha;
  std::vector<double> obs_precision;
  std::vector<double> obs_frequency;
  std::vector<double> ctrl_frequency;
  std::vector<double> noise;  // multiples of the base process noise
};

struct LateralReport {
  std::vector<std::string> dropped;  // grid points that failed, with reasons
};

/// Table DPI: functionality (system_noise), resources (obs_precision [m,
/// descending], obs_freq [Hz], ctrl_freq [Hz], J_track, J_eff). One row per
/// grid point and noise level.
DpiPtr lateral_control_dpi(const LateralGrid& grid, const LateralParams& base, LateralReport* report = nullptr);

}  // namespace mcdp
