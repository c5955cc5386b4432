#include "idrem/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <type_traits>

#include <fmt/format.h>

#include "idrem/excitation.hpp"
#include "idrem/lift.hpp"
#include "idrem/mixing.hpp"

namespace idrem {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// (q^j - 1) / (q - 1), i.e. 1 + q + ... + q^{j-1}.
double geometric(double q, std::int64_t j) {
  if (j <= 0) return 0.0;
  if (std::abs(q - 1.0) < 1e-12) return static_cast<double>(j);
  return (std::pow(q, static_cast<double>(j)) - 1.0) / (q - 1.0);
}

// Inf-safe a * x where a = 0 contributes nothing.
double scaled(double a, double x) { return a == 0.0 ? 0.0 : a * x; }

}  // namespace

BoundConstants compute_constants(const BoundInputs& in) {
  const double size = 2.0 * in.n;
  BoundConstants c;

  const Matrix gamma_inv = in.Gamma.inverse();
  const EigenRange gi = min_max_eigenvalues(0.5 * (gamma_inv + gamma_inv.transpose()));
  c.a1 = std::sqrt(gi.max / gi.min);
  c.eta = in.sigma / (2.0 * gi.max);
  const double sqrt_sigma = std::sqrt(in.sigma);
  c.b1 = c.a1 * ((in.d_max + in.T * in.theta_dot_max * in.omega_max) + sqrt_sigma * in.theta_max) / sqrt_sigma;

  c.eps_max = 0.5 * in.theta_ddot_max * in.T * in.T * in.omega_max + in.d_max;
  for (const IntervalCrossing& k : in.crossings) c.delta_max = std::max(c.delta_max, k.delta_k);
  c.mu_max = (0.5 * in.T * in.T * in.theta_ddot_max * in.omega_max * in.omega_max + in.d_max * in.omega_max) *
             c.delta_max * in.Lambda_max / (in.beta * in.beta) * std::sqrt(size);
  c.Omega_LB = std::exp(-size * in.beta * in.T) * std::pow(in.alpha2_lifted, size);
  c.Omega_UB = std::pow(c.delta_max / in.beta, size);

  // Worst interval: the one with the largest per-interval contraction factor.
  c.crossing_missing = in.crossings.empty();
  double worst_q = -1.0;
  double min_omega = kInf;
  for (const IntervalCrossing& k : in.crossings) {
    if (!k.T0k) {
      c.crossing_missing = true;
      continue;
    }
    const double offset = *k.T0k - k.t_start;
    const double q = c.a1 * std::exp(-c.eta * offset) * std::exp(-in.gamma0 * 0.5 * (in.T - offset));
    if (q > worst_q) {
      worst_q = q;
      c.T0k_offset = offset;
    }
    min_omega = std::min(min_omega, k.Omega_T0k);
  }
  if (c.crossing_missing) {
    // T0k = t_{k+1}: no DREM phase in that interval.
    c.T0k_offset = in.T;
    c.Omega_T0k = 0.0;
  } else {
    c.Omega_T0k = min_omega;
  }

  c.a = c.a1 * std::exp(-c.eta * c.T0k_offset);
  c.DeltaT = 0.5 * (in.T - c.T0k_offset);
  c.b = std::exp(-in.gamma0 * c.DeltaT) * c.b1 + (c.Omega_T0k > 0.0 ? c.mu_max / c.Omega_T0k : kInf);
  c.contraction = c.a * std::exp(-in.gamma0 * c.DeltaT);
  c.post_contraction = c.a1 * std::exp(-c.eta * in.T);
  c.drift = in.theta_dot_max * in.T;
  c.gamma0_min = c.DeltaT > 0.0 ? std::log(1.0 / c.a) / c.DeltaT : kInf;
  // With DeltaT = 0 no gamma0 clears the contraction threshold.
  c.contraction_ok = c.contraction < 1.0 && std::isfinite(c.gamma0_min);
  c.asymptotic_bound = asymptotic_bound(c, in.delta1_max);
  return c;
}

double error_bound_fe(std::int64_t k, double theta_tilde0, const BoundConstants& c, double delta1_max) {
  const double q = c.contraction;
  return std::pow(q, static_cast<double>(k + 1)) * theta_tilde0 + geometric(q, k) * q * delta1_max +
         scaled(geometric(q, k + 1), c.b) + c.drift;
}

double asymptotic_bound(const BoundConstants& c, double delta1_max) {
  if (!(c.contraction < 1.0)) return kInf;
  const double q = c.contraction;
  return (q * delta1_max + c.b) / (1.0 - q) + c.drift;
}

double error_bound_post(std::int64_t i, double theta_tilde_te, const BoundConstants& c, double delta1_max) {
  const double p = c.post_contraction;
  return std::pow(p, static_cast<double>(i + 1)) * theta_tilde_te + geometric(p, i) * p * delta1_max +
         scaled(geometric(p, i + 1), c.b1) + c.drift;
}

OmegaAuditReport omega_audit(const RunResult& run) {
  const Scenario& s = run.scenario;
  const double size = 2.0 * s.n;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  OmegaAuditReport rep;

  std::size_t j = 0;
  while (j < run.steps.size()) {
    const double t_i = run.steps[j].t_i;
    IntervalAudit a;
    a.index = run.steps[j].interval;
    a.t_start = t_i;
    double delta_k = 0.0;
    double omega_peak = 0.0;
    const std::size_t first = j;
    for (; j < run.steps.size() && run.steps[j].t_i == t_i; ++j) {
      const StepRecord& r = run.steps[j];
      if (r.Omega < 0.0) ++a.negative;
      if (j > first) {
        const StepRecord& prev = run.steps[j - 1];
        const double tol = 64.0 * eps * std::pow(std::max(prev.gram_norm, r.gram_norm), size);
        if (r.Omega < prev.Omega - tol) ++a.nonmonotone;
      }
      if (!a.T0k && r.Omega >= s.gains.kappa) {
        a.T0k = r.t;
        a.Omega_T0k = r.Omega;
      }
      delta_k = std::max(delta_k, r.lifted_sq_norm);
      omega_peak = std::max(omega_peak, r.Omega);
      a.mu_max_observed = std::max(a.mu_max_observed, r.mu_norm);
      a.Omega_end = r.Omega;
    }
    a.delta_k = delta_k;
    a.Omega_UB = std::pow(delta_k / s.beta, size);
    a.Omega_UB_ratio = a.Omega_UB > 0.0 ? omega_peak / a.Omega_UB : (omega_peak > 0.0 ? kInf : 0.0);

    rep.negative_total += a.negative;
    rep.nonmonotone_total += a.nonmonotone;
    if (a.Omega_UB_ratio > 1.0) ++rep.upper_bound_violations;
    if (a.T0k) rep.min_Omega_T0k = std::min(rep.min_Omega_T0k.value_or(kInf), a.Omega_T0k);
    rep.max_mu_observed = std::max(rep.max_mu_observed, a.mu_max_observed);
    rep.intervals.push_back(a);
  }
  return rep;
}

std::vector<IntervalCrossing> collect_crossings(const RunResult& run, double t_e) {
  const Scenario& s = run.scenario;
  const OmegaAuditReport rep = omega_audit(run);
  std::vector<IntervalCrossing> out;
  const double tol = 1e-9 * s.grid.T;
  for (const IntervalAudit& a : rep.intervals) {
    if (a.t_start < s.grid.t_r_plus - tol || a.t_start + s.grid.T > t_e + tol) continue;
    IntervalCrossing c;
    c.index = a.index;
    c.t_start = a.t_start;
    c.T0k = a.T0k;
    c.Omega_T0k = a.Omega_T0k;
    c.delta_k = a.delta_k;
    out.push_back(c);
  }
  return out;
}

double delta1_max(const Scenario& s) {
  double worst = 0.0;
  Vector prev = eval_truth(s, s.grid.t_r_plus).theta;
  for (std::int64_t i = 1;; ++i) {
    const double t = s.grid.t_r_plus + static_cast<double>(i) * s.grid.T;
    if (t > s.t_end * (1.0 + 1e-12)) break;
    Vector cur = eval_truth(s, std::min(t, s.t_end)).theta;
    worst = std::max(worst, (cur - prev).norm());
    prev = std::move(cur);
  }
  return worst;
}

double lambda_max_norm(int n, double T) {
  double sup = 0.0;
  constexpr int kSamples = 1000;
  for (int j = 0; j <= kSamples; ++j) {
    const double tau = T * static_cast<double>(j) / kSamples;
    const Matrix lam = lambda_matrix(tau, 0.0, n);
    sup = std::max(sup, std::sqrt(min_max_eigenvalues(lam * lam.transpose()).max));
  }
  return sup;
}

BoundAudit audit_run(const RunResult& run, double Ts) {
  const Scenario& s = run.scenario;
  if (run.steps.empty()) throw DomainError("audit_run: run has no step records");
  BoundAudit out;
  const SignalSuprema sup = compute_suprema(s);
  const ExcitationLevels lifted =
      check_fe(sample_lifted_regressor(s, s.grid.t_r_plus, s.t_e), s.grid.t_r_plus, s.t_e, Ts);

  BoundInputs& in = out.inputs;
  in.n = s.n;
  in.omega_max = sup.omega_max;
  in.theta_max = sup.theta_max;
  in.theta_dot_max = sup.theta_dot_max;
  in.theta_ddot_max = sup.theta_ddot_max;
  in.d_max = sup.d_max;
  in.alpha2_lifted = lifted.alpha2;
  in.Ts = Ts;
  in.Lambda_max = lambda_max_norm(s.n, s.grid.T);
  in.T = s.grid.T;
  in.beta = s.beta;
  in.gamma0 = s.gains.gamma0;
  in.Gamma = s.gains.Gamma;
  in.sigma = s.gains.sigma;
  in.kappa = s.gains.kappa;
  in.delta1_max = delta1_max(s);
  in.crossings = collect_crossings(run, s.t_e);

  out.constants = compute_constants(in);
  out.omega_audit = omega_audit(run);

  const double tol = 1e-9 * s.grid.T;
  auto error_at = [&run](double t) {
    const auto it = std::lower_bound(run.steps.begin(), run.steps.end(), t,
                                     [](const StepRecord& r, double x) { return r.t < x - 1e-12; });
    if (it == run.steps.end()) throw DomainError(fmt::format("audit_run: no step at t = {}", t));
    return it->err_inst;
  };
  out.theta_tilde0 = error_at(s.grid.t_r_plus);
  out.theta_tilde_te = s.t_e < s.t_end ? error_at(s.t_e) : run.intervals.back().err_end;

  out.worst_fe_margin = kInf;
  out.worst_post_margin = kInf;
  for (const IntervalRecord& r : run.intervals) {
    if (r.t_start < s.grid.t_r_plus - tol) continue;
    if (r.t_end <= s.t_e + tol) {
      const double bound = error_bound_fe(r.index, out.theta_tilde0, out.constants, in.delta1_max);
      ++out.fe_intervals;
      if (!(r.err_end <= bound)) ++out.fe_violations;
      out.worst_fe_margin = std::min(out.worst_fe_margin, bound - r.err_end);
    } else if (r.t_start >= s.t_e - tol) {
      const auto i = static_cast<std::int64_t>(std::llround((r.t_start - s.t_e) / s.grid.T));
      const double bound = error_bound_post(i, out.theta_tilde_te, out.constants, in.delta1_max);
      ++out.post_intervals;
      if (!(r.err_end <= bound)) ++out.post_violations;
      out.worst_post_margin = std::min(out.worst_post_margin, bound - r.err_end);
    }
  }
  return out;
}

std::string format_bounds(const BoundAudit& a, const std::string& section) {
  const BoundInputs& in = a.inputs;
  const BoundConstants& c = a.constants;
  const OmegaAuditReport& p = a.omega_audit;
  std::string out;
  auto put = [&](std::string_view key, auto value) {
    if constexpr (std::is_floating_point_v<decltype(value)>) {
      out += fmt::format("{}.{} = {:.17g}\n", section, key, value);
    } else {
      out += fmt::format("{}.{} = {}\n", section, key, value);
    }
  };
  put("inputs.omega_max", in.omega_max);
  put("inputs.theta_max", in.theta_max);
  put("inputs.theta_dot_max", in.theta_dot_max);
  put("inputs.theta_ddot_max", in.theta_ddot_max);
  put("inputs.d_max", in.d_max);
  put("inputs.alpha2_lifted", in.alpha2_lifted);
  put("inputs.Ts", in.Ts);
  put("inputs.Lambda_max", in.Lambda_max);
  put("inputs.Lambda_max_interpretation", std::string("sup_t ||Lambda(t, t_i)||_2 over one interval"));
  put("inputs.delta1_max", in.delta1_max);
  put("inputs.fe_intervals", static_cast<std::int64_t>(in.crossings.size()));
  put("constants.a1", c.a1);
  put("constants.eta", c.eta);
  put("constants.b1", c.b1);
  put("constants.a", c.a);
  put("constants.DeltaT", c.DeltaT);
  put("constants.b", c.b);
  put("constants.T0k_offset", c.T0k_offset);
  put("constants.Omega_T0k", c.Omega_T0k);
  put("constants.mu_max", c.mu_max);
  put("constants.delta_max", c.delta_max);
  put("constants.Omega_LB", c.Omega_LB);
  put("constants.Omega_UB", c.Omega_UB);
  put("constants.gram_size_exponent", 2 * in.n);
  put("constants.eps_max", c.eps_max);
  put("constants.contraction", c.contraction);
  put("constants.post_contraction", c.post_contraction);
  put("constants.drift", c.drift);
  put("constants.asymptotic_bound", c.asymptotic_bound);
  put("constants.gamma0_min", c.gamma0_min);
  put("constants.crossing_missing", c.crossing_missing);
  put("constants.contraction_ok", c.contraction_ok);
  put("kappa", in.kappa);
  put("omega_audit.min_Omega_T0k", p.min_Omega_T0k.value_or(0.0));
  put("omega_audit.negative", p.negative_total);
  put("omega_audit.nonmonotone", p.nonmonotone_total);
  put("omega_audit.upper_bound_violations", p.upper_bound_violations);
  put("omega_audit.max_mu_observed", p.max_mu_observed);
  put("audit.theta_tilde0", a.theta_tilde0);
  put("audit.theta_tilde_te", a.theta_tilde_te);
  put("audit.fe_intervals", a.fe_intervals);
  put("audit.fe_violations", a.fe_violations);
  put("audit.worst_fe_margin", a.worst_fe_margin);
  put("audit.post_intervals", a.post_intervals);
  put("audit.post_violations", a.post_violations);
  put("audit.worst_post_margin", a.worst_post_margin);
  return out;
}

}  // namespace idrem
