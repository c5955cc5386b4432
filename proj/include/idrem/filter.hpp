#pragma once

#include <cmath>

#include "idrem/types.hpp"

namespace idrem {

/// Interval-reset integral filter with exponential forgetting:
///
///   omega_f(t) = int_{t_i}^{t} w(tau) omega_bar omega_bar^T dtau
///   y_f(t)     = int_{t_i}^{t} w(tau) omega_bar y^T dtau
///   w(tau)     = exp(-beta * (tau - t_i))
///
/// Both integrals restart from zero at every grid point t_i.
struct FilterState {
  Matrix omega_f;  // 2n x 2n, symmetric PSD
  Vector y_f;      // 2n
  double t_i = 0.0;
  double elapsed = 0.0;  // t - t_i
  double width = 0.0;    // interval width T; 0 disables the boundary check

  static FilterState zero(int dim, double width = 0.0);
  [[nodiscard]] int dim() const { return static_cast<int>(y_f.size()); }
};

/// Integrand values at one instant.
struct FilterInput {
  Matrix omega_bar;  // 2n x m
  RowVector y;       // 1 x m
};

FilterState filter_reset(FilterState state, double t_i);

/// Advances by dt with the trapezoidal rule, using the integrand at the
/// step start (elapsed) and at the step end (elapsed + dt, left limit).
/// omega_f is re-symmetrised after the update.
///
/// Throws ContractError when the step would run past t_i + width.
FilterState filter_step(const FilterState& state, const FilterInput& start,
                        const FilterInput& end, double beta, double dt);

/// Forgetting kernel at `elapsed` seconds into the interval.
inline double forgetting_weight(double beta, double elapsed) {
  return std::exp(-beta * elapsed);
}

}  // namespace idrem
