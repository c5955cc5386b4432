#include "idrem/lift.hpp"

#include <cmath>

#include <fmt/format.h>

namespace idrem {

void TimeGridConfig::validate() const {
  if (!(T > 0.0)) throw ConfigError("grid.T: must be > 0");
  if (!(t_r_plus >= 0.0)) throw ConfigError("grid.t_r_plus: must be >= 0");
}

GridPoint interval_index(double t, const TimeGridConfig& grid) {
  if (t < grid.t_r_plus) return {0, 0.0};
  const double q = (t - grid.t_r_plus) / grid.T;
  double k = std::floor(q);
  const double nearest = std::round(q);
  if (std::abs(q - nearest) <= 1e-9 * std::max(1.0, std::abs(q))) k = nearest;
  return {static_cast<std::int64_t>(k), grid.t_r_plus + k * grid.T};
}

Matrix lambda_matrix(double t, double t_i, int n) {
  Matrix lam = Matrix::Zero(n, 2 * n);
  lam.leftCols(n).setIdentity();
  lam.rightCols(n).diagonal().setConstant(t - t_i);
  return lam;
}

Matrix lift(const Matrix& omega, double t, double t_i) {
  const auto n = omega.rows();
  Matrix out(2 * n, omega.cols());
  out.topRows(n) = omega;
  out.bottomRows(n) = (t - t_i) * omega;
  return out;
}

}  // namespace idrem
