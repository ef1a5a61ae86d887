#include "mcdp/lateral.hpp"

#include <cmath>
#include <cstdio>

#include <Eigen/Eigenvalues>

#include "mcdp/errors.hpp"

namespace mcdp {

namespace {

double rel_residual(const Eigen::Matrix2d& next, const Eigen::Matrix2d& cur) {
  return (next - cur).norm() / std::max(1.0, next.norm());
}

// Control DARE S = A'SA + Q - A'SB (R + B'SB)^-1 B'SA by fixed-point iteration.
Eigen::Matrix2d control_riccati(const LateralLoop& m, std::size_t& iters) {
  Eigen::Matrix2d S = m.Qd;
  double res = INFINITY;
  for (iters = 1; iters <= kRiccatiMaxIter; ++iters) {
    const double g = m.Rd + m.B.dot(S * m.B);
    const Eigen::RowVector2d k = (m.B.transpose() * S * m.A) / g;
    Eigen::Matrix2d next = m.A.transpose() * S * m.A + m.Qd - m.A.transpose() * S * m.B * k;
    next = 0.5 * (next + next.transpose());
    res = rel_residual(next, S);
    S = next;
    if (!S.allFinite()) throw ModelError("control Riccati iteration diverged (not stabilizable)");
    if (res < kRiccatiTolerance) return S;
  }
  throw NumericalError("control Riccati iteration did not converge", res);
}

// Filter DARE (prior covariance, C = I), started from P = W.
Eigen::Matrix2d filter_riccati(const LateralLoop& m, std::size_t& iters) {
  Eigen::Matrix2d P = m.W;
  double res = INFINITY;
  for (iters = 1; iters <= kRiccatiMaxIter; ++iters) {
    const Eigen::Matrix2d gain = P * (P + m.V).inverse();
    Eigen::Matrix2d next = m.A * (P - gain * P) * m.A.transpose() + m.W;
    next = 0.5 * (next + next.transpose());
    res = rel_residual(next, P);
    P = next;
    if (!P.allFinite()) throw ModelError("filter Riccati iteration diverged (not detectable)");
    if (res < kRiccatiTolerance) return P;
  }
  throw NumericalError("filter Riccati iteration did not converge", res);
}

// Z = F Z F' + Q by doubling.
Eigen::Matrix4d stationary_covariance(const Eigen::Matrix4d& F, const Eigen::Matrix4d& Q) {
  Eigen::Matrix4d X = Q;
  Eigen::Matrix4d Ak = F;
  for (int i = 0; i < 200; ++i) {
    const Eigen::Matrix4d next = X + Ak * X * Ak.transpose();
    Ak = Ak * Ak;
    const double res = (next - X).norm() / std::max(1.0, next.norm());
    X = next;
    if (res < 1e-14 || Ak.norm() < 1e-300) break;
  }
  return 0.5 * (X + X.transpose());
}

}  // namespace

void LateralParams::validate() const {
  if (!(alpha > 0)) throw ModelError("alpha must be > 0");
  if (!(r0 > 0)) throw ModelError("r0 must be > 0");
  if (!(obs_frequency > 0 && ctrl_frequency > 0)) throw ModelError("frequencies must be > 0");
  if (!(speed > 0) || !(gain != 0)) throw ModelError("speed and steering gain must be nonzero (not stabilizable)");
  if (!(w_theta >= 0 && w_y >= 0)) throw ModelError("process noise intensities must be >= 0");
  if (!(obs_precision > 0)) throw ModelError("obs_precision must be > 0");
  if (std::isinf(obs_precision) || std::isinf(angle_ratio))
    throw ModelError("infinite observation noise: the state is not detectable");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(0.5 * (q0 + q0.transpose()));
  if (es.eigenvalues().minCoeff() < -1e-12) throw ModelError("Q0 must be positive semidefinite");
}

LateralLoop build_lateral_loop(const LateralParams& p) {
  p.validate();
  LateralLoop m;
  const double dt = 1.0 / p.ctrl_frequency;
  const double v = p.speed;
  const double c = p.gain;
  m.A << 1, 0, v * dt, 1;
  m.B << c * dt, v * c * dt * dt / 2;
  m.W << p.w_theta * dt, p.w_theta * v * dt * dt / 2, p.w_theta * v * dt * dt / 2,
      p.w_theta * v * v * dt * dt * dt / 3 + p.w_y * dt;
  const double sy = p.obs_precision;
  const double st = p.obs_precision * p.angle_ratio;
  const double hold = p.ctrl_frequency / p.obs_frequency;
  m.V << st * st * hold, 0, 0, sy * sy * hold;
  m.Qd = p.alpha * p.q0 * dt;
  m.Rd = p.r0 / p.alpha * dt;

  const Eigen::Matrix2d S = control_riccati(m, m.control_iterations);
  m.K = (m.B.transpose() * S * m.A) / (m.Rd + m.B.dot(S * m.B));
  const Eigen::Matrix2d P = filter_riccati(m, m.filter_iterations);
  m.L = P * (P + m.V).inverse();

  const Eigen::Matrix2d I = Eigen::Matrix2d::Identity();
  const Eigen::Matrix2d BK = m.B * m.K;
  const Eigen::Matrix2d Acl = m.A - BK;
  m.F.setZero();
  m.F.block<2, 2>(0, 0) = m.A - BK * m.L;
  m.F.block<2, 2>(0, 2) = -BK * (I - m.L);
  m.F.block<2, 2>(2, 0) = Acl * m.L;
  m.F.block<2, 2>(2, 2) = Acl * (I - m.L);
  m.Gw.setZero();
  m.Gw.block<2, 2>(0, 0) = I;
  m.Gv.block<2, 2>(0, 0) = -BK * m.L;
  m.Gv.block<2, 2>(2, 0) = Acl * m.L;
  m.H.segment<2>(0) = -m.K * m.L;
  m.H.segment<2>(2) = -m.K * (I - m.L);
  m.Hv = -m.K * m.L;

  Eigen::EigenSolver<Eigen::Matrix4d> es(m.F, false);
  const double rho = es.eigenvalues().cwiseAbs().maxCoeff();
  if (!(rho < 1.0 - 1e-12)) throw ModelError("closed loop is not stable (spectral radius " + std::to_string(rho) + ")");

  const Eigen::Matrix4d Q = m.Gw * m.W * m.Gw.transpose() + m.Gv * m.V * m.Gv.transpose();
  m.Z = stationary_covariance(m.F, Q);
  return m;
}

LateralOutcome solve_lqg_lateral(const LateralParams& p) {
  const LateralLoop m = build_lateral_loop(p);
  LateralOutcome out;
  out.j_track = std::max(0.0, (p.q0 * m.Z.block<2, 2>(0, 0)).trace());
  const double eu2 = (m.H * m.Z * m.H.transpose())(0, 0) + (m.Hv * m.V * m.Hv.transpose())(0, 0);
  out.j_eff = std::max(0.0, p.r0 * eu2);
  return out;
}

DpiPtr lateral_control_dpi(const LateralGrid& grid, const LateralParams& base, LateralReport* report) {
  if (grid.alpha.empty() || grid.obs_precision.empty() || grid.obs_frequency.empty() ||
      grid.ctrl_frequency.empty() || grid.noise.empty())
    throw ModelError("lateral grid must not be empty");
  const Poset fun = Poset::product({Poset::numeric()});
  const Poset res = Poset::product({Poset::opposite(Poset::numeric("m")), Poset::numeric("Hz"), Poset::numeric("Hz"),
                                    Poset::numeric(), Poset::numeric()});
  MonotoneTable t{fun, res, {}};
  auto fmt = [](double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return std::string(buf);
  };
  for (double a : grid.alpha)
    for (double prec : grid.obs_precision)
      for (double fo : grid.obs_frequency)
        for (double fc : grid.ctrl_frequency)
          for (double n : grid.noise) {
            LateralParams p = base;
            p.alpha = a;
            p.obs_precision = prec;
            p.obs_frequency = fo;
            p.ctrl_frequency = fc;
            p.w_theta = base.w_theta * n;
            p.w_y = base.w_y * n;
            const std::string id = "a" + fmt(a) + "/p" + fmt(prec) + "/fo" + fmt(fo) + "/fc" + fmt(fc) + "/n" + fmt(n);
            try {
              const auto o = solve_lqg_lateral(p);
              Impl impl{id, {{"alpha", fmt(a)}, {"obs_freq", fmt(fo)}, {"ctrl_freq", fmt(fc)}}, {}};
              t.rows.push_back({impl, Element::tuple({n}),
                                Element::tuple({prec, fo, fc, o.j_track, o.j_eff})});
            } catch (const Error& e) {
              if (report) report->dropped.push_back(id + ": " + e.what());
            }
          }
  return make_table_dpi(std::move(t));
}

}  // namespace mcdp
