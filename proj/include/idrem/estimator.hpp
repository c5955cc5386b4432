#pragma once

#include <string_view>

#include "idrem/types.hpp"

namespace idrem {

struct MixedRegression;

struct EstimatorGains {
  double gamma0 = 100.0;
  Matrix Gamma;  // symmetric positive definite, n x n
  double sigma = 1e-4;
  double kappa = 1e-9;

  /// Throws ConfigError on non-positive scalars or a Gamma that is not SPD
  /// of size n.
  void validate(int n) const;
};

enum class Branch { Drem, SigmaMod };

std::string_view to_string(Branch b);

struct EstimatorState {
  Vector theta_hat;
  Branch branch = Branch::SigmaMod;
  double t = 0.0;
};

struct EstimatorRate {
  Vector dtheta;
  Branch branch = Branch::SigmaMod;
};

/// Right-hand side of the switching law.
///
///   Omega >= kappa : dtheta = -gamma0 * (theta_hat - Y / Omega)
///   otherwise      : dtheta = -Gamma * omega * (theta_hat^T omega - y)^T - sigma * Gamma * theta_hat
///
/// The first branch is the algebraic simplification of
/// -(gamma0 / Omega^2) * Omega * (Omega * theta_hat - Y); it is exact for
/// Omega > 0 and does not overflow when Omega is small.
EstimatorRate estimator_rhs(const Vector& theta_hat, double Omega, const Vector& Y,
                            const Matrix& omega, const RowVector& y,
                            const EstimatorGains& gains);

/// One classical RK4 step of the switching law with (Omega, Y, omega, y)
/// held at their values at the step start. The recorded branch is the one
/// active at the step start.
EstimatorState estimator_step(const EstimatorState& state, const MixedRegression& mixed,
                              const Matrix& omega, const RowVector& y,
                              const EstimatorGains& gains, double dt);

/// Euclidean distance between estimate and truth.
double parameter_error(const Vector& theta_hat, const Vector& theta_true);

}  // namespace idrem
