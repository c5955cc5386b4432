#pragma once

#include <optional>
#include <string>
#include <vector>

#include "idrem/signals.hpp"
#include "idrem/types.hpp"

namespace idrem {

/// Regressor sampled on a uniform grid t0 + j*dt. Each segment j keeps the
/// value at its left end and the left limit at its right end, so lifted
/// regressors (which jump at grid points) integrate without smearing.
struct RegressorTrace {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<Matrix> left;   // value at t0 + j*dt
  std::vector<Matrix> right;  // left limit at t0 + (j+1)*dt

  /// Continuous signal: right[j] = samples[j + 1].
  static RegressorTrace from_samples(double t0, double dt, std::vector<Matrix> samples);

  [[nodiscard]] std::size_t segments() const { return left.size(); }
  [[nodiscard]] double t_end() const { return t0 + static_cast<double>(segments()) * dt; }
  [[nodiscard]] int rows() const;
};

/// omega sampled at the scenario step over [t_a, t_b].
RegressorTrace sample_regressor(const Scenario& s, double t_a, double t_b);

/// omega_bar = lift(omega) on the scenario grid over [t_a, t_b].
RegressorTrace sample_lifted_regressor(const Scenario& s, double t_a, double t_b);

/// Trapezoidal int_{t_a}^{t_b} omega omega^T dtau at the trace resolution.
/// Window ends are rounded to the nearest trace node. Throws DomainError if
/// the window is empty or leaves the trace.
Matrix gram(const RegressorTrace& trace, double t_a, double t_b);

struct ExcitationLevels {
  double t_r_plus = 0.0;
  double t_e = 0.0;
  double Ts = 0.0;
  double alpha1 = 0.0;        // lambda_min of the full-window Gram
  double alpha2 = 0.0;        // min over window starts of lambda_min of the Ts-window Gram
  double alpha2_start = 0.0;  // window start attaining alpha2
  double lambda_max = 0.0;    // lambda_max of the full-window Gram (scale reference)
  bool satisfied = false;
};

struct ExcitationReport {
  ExcitationLevels raw;
  std::optional<ExcitationLevels> lifted;
};

/// Relative level below which an excitation level counts as zero:
/// alpha > kExcitationRelTol * lambda_max(full Gram).
inline constexpr double kExcitationRelTol = 1e-9;

/// Window starts are swept at the trace resolution over [t_r_plus, t_e - Ts];
/// Grams come from a prefix sum so each window is O(1).
/// Throws DomainError if t_e - t_r_plus < Ts or the window leaves the trace.
ExcitationLevels check_fe(const RegressorTrace& trace, double t_r_plus, double t_e, double Ts);

/// Raw and lifted checks for a scenario.
ExcitationReport excitation_report(const Scenario& s, double t_r_plus, double t_e, double Ts);

/// key = value lines, prefixed by `section.`.
std::string format_excitation(const ExcitationReport& report, const std::string& section = "excitation");

}  // namespace idrem
