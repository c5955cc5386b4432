#include "idrem/estimator.hpp"

#include <cmath>

#include <fmt/format.h>

#include "idrem/mixing.hpp"

namespace idrem {

void EstimatorGains::validate(int n) const {
  if (!(gamma0 > 0.0)) throw ConfigError("gains.gamma0: must be > 0");
  if (!(sigma > 0.0)) throw ConfigError("gains.sigma: must be > 0");
  if (!(kappa > 0.0)) throw ConfigError("gains.kappa: must be > 0");
  if (Gamma.rows() != n || Gamma.cols() != n) {
    throw ConfigError(fmt::format("gains.Gamma: expected {}x{}", n, n));
  }
  if ((Gamma - Gamma.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, Gamma.cwiseAbs().maxCoeff())) {
    throw ConfigError("gains.Gamma: must be symmetric");
  }
  if (!(min_max_eigenvalues(Gamma).min > 0.0)) throw ConfigError("gains.Gamma: must be positive definite");
}

std::string_view to_string(Branch b) { return b == Branch::Drem ? "drem" : "sigma"; }

EstimatorRate estimator_rhs(const Vector& theta_hat, double Omega, const Vector& Y,
                            const Matrix& omega, const RowVector& y, const EstimatorGains& gains) {
  if (!std::isfinite(Omega) || !theta_hat.allFinite() || !Y.allFinite() || !omega.allFinite() ||
      !y.allFinite()) {
    throw NumericError("estimator_rhs: non-finite input");
  }
  if (Omega >= gains.kappa) {
    return {-gains.gamma0 * (theta_hat - Y / Omega), Branch::Drem};
  }
  const RowVector residual = theta_hat.transpose() * omega - y;  // 1 x m
  Vector rate = -gains.Gamma * (omega * residual.transpose()) - gains.sigma * (gains.Gamma * theta_hat);
  return {std::move(rate), Branch::SigmaMod};
}

EstimatorState estimator_step(const EstimatorState& state, const MixedRegression& mixed,
                              const Matrix& omega, const RowVector& y, const EstimatorGains& gains,
                              double dt) {
  auto f = [&](const Vector& x) { return estimator_rhs(x, mixed.Omega, mixed.Y, omega, y, gains); };
  const EstimatorRate k1 = f(state.theta_hat);
  const Vector k2 = f(state.theta_hat + 0.5 * dt * k1.dtheta).dtheta;
  const Vector k3 = f(state.theta_hat + 0.5 * dt * k2).dtheta;
  const Vector k4 = f(state.theta_hat + dt * k3).dtheta;

  EstimatorState out;
  out.theta_hat = state.theta_hat + (dt / 6.0) * (k1.dtheta + 2.0 * k2 + 2.0 * k3 + k4);
  out.branch = k1.branch;
  out.t = state.t + dt;
  if (!out.theta_hat.allFinite()) {
    throw NumericError(fmt::format("estimator_step: estimate diverged at t = {}", out.t));
  }
  return out;
}

double parameter_error(const Vector& theta_hat, const Vector& theta_true) {
  return (theta_hat - theta_true).norm();
}

}  // namespace idrem
