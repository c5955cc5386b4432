#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "idrem/estimator.hpp"
#include "idrem/lift.hpp"
#include "idrem/signal_expr.hpp"
#include "idrem/types.hpp"

namespace idrem {

struct DisturbanceSpec {
  enum class Kind { None, Uniform, Tabulated };

  Kind kind = Kind::None;
  double lo = 0.0;
  double hi = 0.0;
  Signal tabulated;  // deterministic signal applied to every output column

  static DisturbanceSpec none() { return {}; }
  static DisturbanceSpec uniform(double lo, double hi);
  static DisturbanceSpec from_signal(Signal s);

  /// Sup of |d| over the horizon [0, t_end]; tabulated signals are sampled at step h.
  [[nodiscard]] double sup_abs(double t_end, double h) const;
};

/// Complete description of one experiment: ground-truth regression
/// y = Theta^T(t) omega(t) + d(t), grid, filter and estimator settings.
struct Scenario {
  int n = 1;
  int m = 1;
  std::vector<Signal> regressor;  // row-major n x m
  std::vector<Signal> theta;      // n entries
  DisturbanceSpec disturbance;
  double t_end = 1.0;
  double dt = 1e-4;
  std::uint64_t seed = 0;
  TimeGridConfig grid;
  EstimatorGains gains;
  double beta = 0.2;
  Vector theta_hat0;
  // End of the excitation window used for reports and bound audits.
  double t_e = 1.0;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Pseudo-random stream for the disturbance. Conversion to [0, 1) is done
/// here rather than by std::uniform_real_distribution so traces are
/// identical across standard libraries.
class NoiseSource {
 public:
  explicit NoiseSource(std::uint64_t seed) : engine_(seed) {}
  NoiseSource(std::uint64_t seed, std::uint64_t stream);

  double unit();  // uniform on [0, 1)

 private:
  std::mt19937_64 engine_;
};

struct Truth {
  Vector theta;
  Vector theta_dot;
  Vector theta_ddot;
};

struct Sample {
  double t = 0.0;
  Matrix omega;        // n x m
  RowVector y;         // 1 x m
  RowVector d;         // 1 x m, kept for audits
  Vector theta_true;
  Vector theta_dot_true;
};

/// omega(t) per the regressor definition. Throws DomainError outside [0, t_end].
Matrix eval_regressor(const Scenario& s, double t);

/// Theta, dTheta, ddTheta at t. Throws DomainError outside [0, t_end].
Truth eval_truth(const Scenario& s, double t);

/// One draw of d for an integration step (1 x m). For Kind::Uniform each
/// column is lo + (hi - lo) * u, u ~ U[0, 1).
RowVector eval_disturbance(const Scenario& s, double t, NoiseSource& rng);

/// Builds the sample at t with a given disturbance: y = theta^T omega + d.
Sample make_sample(const Scenario& s, double t, const RowVector& d);

/// Regressor normalisation n_s = 1 / (1 + omega^T omega) for m = 1.
/// Throws ConfigError for m > 1.
std::pair<RowVector, Matrix> normalize(const RowVector& y, const Matrix& omega);

/// Numerical suprema over [0, t_end], sampled at dt / 10. Matrix norms are
/// spectral norms.
struct SignalSuprema {
  double omega_max = 0.0;
  double theta_max = 0.0;
  double theta_dot_max = 0.0;
  double theta_ddot_max = 0.0;
  double d_max = 0.0;
};

SignalSuprema compute_suprema(const Scenario& s);

/// Largest singular value of a dense matrix (spectral norm).
double spectral_norm(const Matrix& a);

}  // namespace idrem
