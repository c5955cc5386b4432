#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "idrem/trace.hpp"
#include "idrem/types.hpp"

namespace idrem {

/// Observed behaviour of Omega inside one excitation interval k.
struct IntervalCrossing {
  std::int64_t index = 0;
  double t_start = 0.0;
  std::optional<double> T0k;        // first step with Omega >= kappa
  double Omega_T0k = 0.0;           // Omega at that step (0 when never crossed)
  double delta_k = 0.0;             // sup lambda_max(omega_bar omega_bar^T) over the interval
};

struct BoundInputs {
  int n = 1;
  double omega_max = 0.0;
  double theta_max = 0.0;
  double theta_dot_max = 0.0;
  double theta_ddot_max = 0.0;
  double d_max = 0.0;
  double alpha2_lifted = 0.0;
  double Ts = 0.0;
  double Lambda_max = 0.0;  // sup over an interval of ||Lambda(t, t_i)||_2
  double T = 0.25;
  double beta = 0.2;
  double gamma0 = 100.0;
  Matrix Gamma;
  double sigma = 1e-4;
  double kappa = 1e-9;
  double delta1_max = 0.0;  // max jump of Theta between grid points
  std::vector<IntervalCrossing> crossings;  // excitation intervals only
};

/// Every constant of the error bounds. Exponents that the derivation writes
/// as n use the true Gram size 2n.
struct BoundConstants {
  // sigma-modification phase
  double a1 = 1.0;
  double eta = 0.0;
  double b1 = 0.0;
  // DREM phase (worst observed interval)
  double a = 1.0;
  double DeltaT = 0.0;
  double b = 0.0;
  double T0k_offset = 0.0;      // T0k - t_k of the worst interval
  double Omega_T0k = 0.0;       // smallest observed Omega(T0k)
  double mu_max = 0.0;
  double delta_max = 0.0;       // max_k delta_k
  double Omega_LB = 0.0;        // exp(-2n beta T) alpha2^{2n}
  double Omega_UB = 0.0;        // (delta_max / beta)^{2n}
  double eps_max = 0.0;         // 0.5 ddTheta_max T^2 omega_max + d_max
  double contraction = 1.0;     // a * exp(-gamma0 DeltaT)
  double post_contraction = 1.0;  // a1 * exp(-eta T)
  double drift = 0.0;           // dTheta_max * T
  double asymptotic_bound = 0.0;  // +inf when contraction >= 1
  double gamma0_min = 0.0;      // (1 / DeltaT) ln(1 / a); +inf when DeltaT = 0
  bool crossing_missing = false;  // some interval never reached kappa (vacuous bound)
  bool contraction_ok = false;
};

BoundConstants compute_constants(const BoundInputs& in);

/// Finite-k bound during excitation; k counts intervals since t_r_plus.
double error_bound_fe(std::int64_t k, double theta_tilde0, const BoundConstants& c,
                      double delta1_max);

/// k -> infinity limit; +inf when the contraction condition fails.
double asymptotic_bound(const BoundConstants& c, double delta1_max);

/// Bound i intervals after excitation is lost.
double error_bound_post(std::int64_t i, double theta_tilde_te, const BoundConstants& c,
                        double delta1_max);

struct IntervalAudit {
  std::int64_t index = 0;
  double t_start = 0.0;
  std::optional<double> T0k;
  double Omega_T0k = 0.0;
  double Omega_end = 0.0;
  double delta_k = 0.0;
  double Omega_UB = 0.0;        // (delta_k / beta)^{2n}
  double Omega_UB_ratio = 0.0;  // max_t Omega(t) / Omega_UB
  std::int64_t negative = 0;
  std::int64_t nonmonotone = 0;
  double mu_max_observed = 0.0;
};

struct OmegaAuditReport {
  std::vector<IntervalAudit> intervals;
  std::int64_t negative_total = 0;
  std::int64_t nonmonotone_total = 0;
  std::int64_t upper_bound_violations = 0;
  std::optional<double> min_Omega_T0k;  // over intervals that crossed kappa
  double max_mu_observed = 0.0;
};

/// Per-interval audit of the step records: Omega >= 0, Omega nondecreasing
/// inside each interval, first crossing of kappa, and Omega against
/// (delta_k/beta)^{2n}. A decrease counts as a violation only when it exceeds
/// the determinant's rounding scale 64 * eps * ||omega_f||_F^{2n}.
OmegaAuditReport omega_audit(const RunResult& run);

/// Crossing data for the intervals inside [t_r_plus, t_e).
std::vector<IntervalCrossing> collect_crossings(const RunResult& run, double t_e);

/// max_i ||Theta(t_{i+1}) - Theta(t_i)|| over the grid covering [0, t_end].
double delta1_max(const Scenario& s);

/// sup over [0, T] of ||Lambda(t_i + tau, t_i)||_2, evaluated numerically.
double lambda_max_norm(int n, double T);

struct BoundAudit {
  BoundInputs inputs;
  BoundConstants constants;
  OmegaAuditReport omega_audit;
  double theta_tilde0 = 0.0;
  double theta_tilde_te = 0.0;
  std::int64_t fe_intervals = 0;
  std::int64_t fe_violations = 0;    // interval ends above the finite-k bound
  std::int64_t post_intervals = 0;
  std::int64_t post_violations = 0;  // interval ends above the post-excitation bound
  double worst_fe_margin = 0.0;      // min over FE interval ends of bound - error
  double worst_post_margin = 0.0;
};

/// Runs the excitation check, the suprema and the interval bookkeeping for a
/// completed run and evaluates all bounds against it.
BoundAudit audit_run(const RunResult& run, double Ts);

std::string format_bounds(const BoundAudit& audit, const std::string& section = "bounds");

}  // namespace idrem
