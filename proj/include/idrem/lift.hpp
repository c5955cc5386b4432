#pragma once

#include <cstdint>

#include "idrem/types.hpp"

namespace idrem {

/// Regular grid t_i = t_r_plus + i*T on which the parameters are frozen
/// to a first-order Taylor polynomial.
struct TimeGridConfig {
  double T = 0.25;
  double t_r_plus = 0.0;

  /// Throws ConfigError when T <= 0 or t_r_plus < 0.
  void validate() const;
};

struct GridPoint {
  std::int64_t index = 0;
  double t_i = 0.0;
};

/// Half-open intervals: t = t_i + T belongs to interval i + 1. Quotients
/// within 1e-9 (relative) of an integer are snapped to it, so t = 0.7 with
/// T = 0.1 lands on index 7. Before t_r_plus the grid returns (0, 0.0).
GridPoint interval_index(double t, const TimeGridConfig& grid);

/// Lambda(t, t_i) in R^{n x 2n} with columns permuted so that
/// theta_i = [Theta_i; dTheta_i] (all values first, then all rates):
/// Lambda * theta_i = Theta_i + (t - t_i) * dTheta_i.
Matrix lambda_matrix(double t, double t_i, int n);

/// omega_bar = Lambda^T(t, t_i) * omega = [omega; (t - t_i) * omega].
Matrix lift(const Matrix& omega, double t, double t_i);

}  // namespace idrem
