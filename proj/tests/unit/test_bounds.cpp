#include <doctest.h>

#include <cmath>
#include <limits>

#include "idrem/bounds.hpp"
#include "idrem/harness.hpp"

using namespace idrem;

namespace {

BoundInputs base_inputs() {
  BoundInputs in;
  in.n = 2;
  in.omega_max = std::sqrt(15.25);
  in.theta_max = 4.8;
  in.theta_dot_max = std::sqrt(1.25);
  in.theta_ddot_max = 1.0;
  in.d_max = 0.0;
  in.alpha2_lifted = 1e-3;
  in.Ts = 0.1;
  in.Lambda_max = std::sqrt(1.0 + 0.0625);
  in.T = 0.25;
  in.beta = 0.2;
  in.gamma0 = 100.0;
  in.Gamma = 0.75 * Matrix::Identity(2, 2);
  in.sigma = 1e-4;
  in.kappa = 1e-9;
  in.delta1_max = 0.3;
  IntervalCrossing c;
  c.index = 0;
  c.t_start = 0.0;
  c.T0k = 0.15;
  c.Omega_T0k = 2e-9;
  c.delta_k = 15.0;
  in.crossings = {c};
  return in;
}

bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }

}  // namespace

TEST_CASE("a1 = 1 and eta = 3.75e-5 for Gamma = 0.75 I, sigma = 1e-4") {
  const BoundConstants c = compute_constants(base_inputs());
  CHECK(rel_close(c.a1, 1.0, 1e-12));
  CHECK(rel_close(c.eta, 3.75e-5, 1e-12));
}

TEST_CASE("a1 and eta for a non-isotropic Gamma") {
  BoundInputs in = base_inputs();
  in.Gamma << 2.0, 0.0, 0.0, 0.5;  // Gamma^-1 eigenvalues 0.5 and 2
  const BoundConstants c = compute_constants(in);
  CHECK(rel_close(c.a1, 2.0, 1e-12));
  CHECK(rel_close(c.eta, 1e-4 / 4.0, 1e-12));
  CHECK(c.a1 >= 1.0);
}

TEST_CASE("b1 by direct substitution") {
  const BoundInputs in = base_inputs();
  const BoundConstants c = compute_constants(in);
  // a1 = 1, d_max = 0: (T dTheta omega + sqrt(sigma) Theta) / sqrt(sigma)
  const double expect = (0.25 * std::sqrt(1.25) * std::sqrt(15.25) + 0.01 * 4.8) / 0.01;
  CHECK(rel_close(c.b1, expect, 1e-12));
}

TEST_CASE("DREM-phase constants by direct substitution") {
  const BoundInputs in = base_inputs();
  const BoundConstants c = compute_constants(in);
  const double offset = 0.15;
  CHECK(rel_close(c.T0k_offset, offset, 1e-12));
  CHECK(rel_close(c.a, std::exp(-3.75e-5 * offset), 1e-12));
  CHECK(rel_close(c.DeltaT, 0.5 * (0.25 - offset), 1e-12));
  const double eps = 0.5 * 1.0 * 0.0625 * std::sqrt(15.25);
  CHECK(rel_close(c.eps_max, eps, 1e-12));
  const double mu = 0.5 * 0.0625 * 1.0 * 15.25 * 15.0 * std::sqrt(1.0625) / 0.04 * 2.0;
  CHECK(rel_close(c.mu_max, mu, 1e-12));
  CHECK(rel_close(c.b, std::exp(-100.0 * c.DeltaT) * c.b1 + mu / 2e-9, 1e-12));
  CHECK(rel_close(c.Omega_UB, std::pow(15.0 / 0.2, 4), 1e-12));
  CHECK(rel_close(c.Omega_LB, std::exp(-4 * 0.2 * 0.25) * 1e-12, 1e-12));
  CHECK(rel_close(c.contraction, c.a * std::exp(-100.0 * c.DeltaT), 1e-12));
  CHECK(rel_close(c.gamma0_min, std::log(1.0 / c.a) / c.DeltaT, 1e-12));
  CHECK(rel_close(c.drift, std::sqrt(1.25) * 0.25, 1e-12));
  CHECK(c.contraction_ok);
  CHECK_FALSE(c.crossing_missing);
  CHECK(std::isfinite(c.asymptotic_bound));
}

TEST_CASE("worst interval is the one with the largest contraction factor") {
  BoundInputs in = base_inputs();
  IntervalCrossing late = in.crossings[0];
  late.index = 1;
  late.t_start = 0.25;
  late.T0k = 0.25 + 0.2;
  late.Omega_T0k = 5e-9;
  in.crossings.push_back(late);
  const BoundConstants c = compute_constants(in);
  CHECK(rel_close(c.T0k_offset, 0.2, 1e-12));
  CHECK(c.Omega_T0k == 2e-9);
}

TEST_CASE("missing crossing makes the bound vacuous") {
  BoundInputs in = base_inputs();
  in.crossings[0].T0k.reset();
  const BoundConstants c = compute_constants(in);
  CHECK(c.crossing_missing);
  CHECK(c.DeltaT == 0.0);
  CHECK(std::isinf(c.b));
  CHECK(std::isinf(c.gamma0_min));
  CHECK_FALSE(c.contraction_ok);
  CHECK(std::isinf(c.asymptotic_bound));
}

TEST_CASE("finite-k bound single-interval collapse") {
  BoundConstants c;
  c.contraction = 0.3;
  c.b = 0.0;
  c.drift = 0.25;
  CHECK(rel_close(error_bound_fe(0, 2.0, c, 0.0), 0.3 * 2.0 + 0.25, 1e-15));
  c.contraction = 0.0;
  c.b = 0.7;
  CHECK(rel_close(error_bound_fe(0, 2.0, c, 0.5), 0.7 + 0.25, 1e-15));
  CHECK(rel_close(error_bound_fe(10, 2.0, c, 0.5), 0.7 + 0.25, 1e-15));
}

TEST_CASE("finite-k bound geometric sums") {
  BoundConstants c;
  c.contraction = 0.5;
  c.b = 0.1;
  c.drift = 0.2;
  // k = 2: q^3 x0 + (1 + q) q D + (1 + q + q^2) b + drift
  const double expect = 0.125 * 4.0 + 1.5 * 0.5 * 0.3 + 1.75 * 0.1 + 0.2;
  CHECK(rel_close(error_bound_fe(2, 4.0, c, 0.3), expect, 1e-14));
  // Converges to the asymptotic value.
  CHECK(rel_close(error_bound_fe(200, 4.0, c, 0.3), asymptotic_bound(c, 0.3), 1e-12));
}

TEST_CASE("asymptotic bound examples") {
  BoundConstants c;
  c.contraction = 0.4;
  c.b = 0.0;
  c.drift = 0.3;
  CHECK(asymptotic_bound(c, 0.0) == doctest::Approx(0.3));
  c.b = 0.2;
  CHECK(rel_close(asymptotic_bound(c, 0.5), (0.4 * 0.5 + 0.2) / 0.6 + 0.3, 1e-14));
  c.contraction = 1.0;
  CHECK(std::isinf(asymptotic_bound(c, 0.5)));
}

TEST_CASE("asymptotic bound tightens with gamma0 and its drift term is linear in T") {
  double prev = std::numeric_limits<double>::infinity();
  for (double g : {10.0, 100.0, 1000.0}) {
    BoundInputs in = base_inputs();
    in.gamma0 = g;
    const double bound = compute_constants(in).asymptotic_bound;
    CHECK(bound < prev);
    prev = bound;
  }
  BoundInputs in = base_inputs();
  const double d1 = compute_constants(in).drift;
  in.T = 0.125;
  in.crossings[0].T0k = 0.075;
  CHECK(rel_close(compute_constants(in).drift, 0.5 * d1, 1e-14));
}

TEST_CASE("post-excitation bound") {
  BoundConstants c;
  c.post_contraction = 0.9;
  c.b1 = 1.5;
  c.drift = 0.25;
  CHECK(rel_close(error_bound_post(0, 2.0, c, 0.4), 0.9 * 2.0 + 1.5 + 0.25, 1e-15));
  c.post_contraction = 0.0;
  CHECK(rel_close(error_bound_post(5, 2.0, c, 0.4), 1.5 + 0.25, 1e-15));
}

TEST_CASE("Lambda_max is sqrt(1 + T^2)") {
  CHECK(rel_close(lambda_max_norm(2, 0.25), std::sqrt(1.0625), 1e-12));
  CHECK(rel_close(lambda_max_norm(1, 0.5), std::sqrt(1.25), 1e-12));
}

TEST_CASE("delta1_max of the reference trajectory") {
  const Scenario s = preset("exp1");
  double worst = 0.0;
  for (int i = 0; i < 80; ++i) {
    worst = std::max(worst, (eval_truth(s, 0.25 * (i + 1)).theta - eval_truth(s, 0.25 * i).theta).norm());
  }
  CHECK(rel_close(delta1_max(s), worst, 1e-12));
}

TEST_CASE("Omega audit on the noise-free reference run") {
  const RunResult run = run_scenario(preset("exp1"));
  const OmegaAuditReport rep = omega_audit(run);
  CHECK(rep.negative_total == 0);
  CHECK(rep.nonmonotone_total == 0);
  CHECK(rep.upper_bound_violations == 0);
  REQUIRE(rep.intervals.size() == 80);
  for (std::size_t k = 0; k < 40; ++k) CHECK(rep.intervals[k].T0k.has_value());
  REQUIRE(rep.min_Omega_T0k.has_value());
  CHECK(*rep.min_Omega_T0k >= 1e-9);
}

TEST_CASE("Omega audit with a zero regressor") {
  Scenario s = preset("exp1");
  s.regressor = {Signal::constant(0.0), Signal::constant(0.0)};
  s.t_end = 2.0;
  s.t_e = 2.0;
  const RunResult run = run_scenario(s);
  const OmegaAuditReport rep = omega_audit(run);
  for (const auto& a : rep.intervals) {
    CHECK_FALSE(a.T0k.has_value());
    CHECK(a.Omega_end == 0.0);
  }
  CHECK_FALSE(rep.min_Omega_T0k.has_value());
}

TEST_CASE("property: bound soundness on the reference runs") {
  for (const char* name : {"exp1", "exp2"}) {
    const RunResult run = run_scenario(preset(name));
    const BoundAudit audit = audit_run(run, 0.1);
    CAPTURE(name);
    CHECK(audit.fe_intervals == 40);
    CHECK(audit.fe_violations == 0);
    CHECK(audit.post_intervals == 40);
    CHECK(audit.post_violations == 0);
    CHECK(audit.constants.contraction_ok);
    CHECK(audit.inputs.crossings.size() == 40);
    // The finite-k bound at k = 39 dominates the observed error at t = 10.
    const IntervalRecord& last = run.intervals[39];
    CHECK(last.t_end == doctest::Approx(10.0));
    CHECK(error_bound_fe(39, audit.theta_tilde0, audit.constants, audit.inputs.delta1_max) >= last.err_end);
    const std::string text = format_bounds(audit);
    CHECK(text.find("bounds.constants.a1 = 1\n") != std::string::npos);
    CHECK(text.find("bounds.constants.gram_size_exponent = 4") != std::string::npos);
  }
}
