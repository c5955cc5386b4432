#include "idrem/harness.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>

#include <fmt/format.h>

#include "idrem/filter.hpp"
#include "idrem/lift.hpp"
#include "idrem/mixing.hpp"

namespace idrem {

namespace {

// Number of dt steps in `span`; ConfigError unless dt divides span.
std::int64_t aligned_steps(double span, double dt, std::string_view key) {
  const double q = span / dt;
  const double r = std::round(q);
  if (std::abs(q - r) > 1e-9 * std::max(1.0, q)) {
    throw ConfigError(fmt::format("{}: {} is not a multiple of dt = {} (dt must divide it)", key, span, dt));
  }
  return static_cast<std::int64_t>(r);
}

struct IntervalSpan {
  std::int64_t index = 0;
  std::int64_t first = 0;  // step index of t_i
  std::int64_t last = 0;   // step index of t_i + width
};

class Grid {
 public:
  Grid(std::int64_t r_steps, std::int64_t width_steps) : r_(r_steps), w_(width_steps) {}

  // Steps before t_r_plus form a single lead-in interval [0, t_r_plus) with index 0.
  [[nodiscard]] IntervalSpan at(std::int64_t k) const {
    if (k < r_) return {0, 0, r_};
    const std::int64_t i = (k - r_) / w_;
    return {i, r_ + i * w_, r_ + (i + 1) * w_};
  }

 private:
  std::int64_t r_;
  std::int64_t w_;
};

double lifted_sq_norm(const Matrix& omega_bar) {
  if (omega_bar.cols() == 1) return omega_bar.squaredNorm();
  return min_max_eigenvalues(omega_bar.transpose() * omega_bar).max;
}

}  // namespace

RunResult run_scenario(const Scenario& s, const RunOptions& opts) {
  s.validate();
  if (opts.log_stride < 1) throw ConfigError("log_stride: must be >= 1");
  const std::int64_t total = aligned_steps(s.t_end, s.dt, "t_end");
  const std::int64_t width = aligned_steps(s.grid.T, s.dt, "grid.T");
  const std::int64_t lead = aligned_steps(s.grid.t_r_plus, s.dt, "grid.t_r_plus");
  const Grid grid(lead, width);
  const int n = s.n;

  RunResult run;
  run.scenario = s;
  run.trace.n = n;
  run.trace.m = s.m;
  run.trace.rows.reserve(static_cast<std::size_t>(total / opts.log_stride + 1));
  if (opts.record_steps) run.steps.reserve(static_cast<std::size_t>(total));

  NoiseSource rng = opts.noise_stream ? NoiseSource(s.seed, *opts.noise_stream) : NoiseSource(s.seed);
  FilterState filter = FilterState::zero(2 * n);
  EstimatorState est{s.theta_hat0, Branch::SigmaMod, 0.0};

  IntervalSpan current{-1, -1, -1};
  double t_i = 0.0;
  Vector theta_at_ti;
  double err_max = 0.0;

  Matrix omega = eval_regressor(s, 0.0);
  Truth truth = eval_truth(s, 0.0);

  for (std::int64_t k = 0; k <= total; ++k) {
    const double t = static_cast<double>(k) * s.dt;
    try {
      const double err = parameter_error(est.theta_hat, truth.theta);
      const IntervalSpan span = grid.at(k);
      if (span.first != current.first) {
        if (current.first >= 0 && k == current.last) {
          IntervalRecord rec;
          rec.index = current.index;
          rec.t_start = t_i;
          rec.t_end = t;
          rec.theta_hat_end = est.theta_hat;
          rec.theta_true_end = truth.theta;
          rec.theta_true_start = theta_at_ti;
          rec.err_end = err;
          rec.err_frozen = parameter_error(est.theta_hat, theta_at_ti);
          rec.err_max = std::max(err_max, err);
          run.intervals.push_back(std::move(rec));
        }
        if (k == total) break;
        current = span;
        t_i = static_cast<double>(span.first) * s.dt;
        theta_at_ti = truth.theta;
        err_max = 0.0;
        filter = filter_reset(std::move(filter), t_i);
        filter.width = static_cast<double>(span.last - span.first) * s.dt;
      }
      if (k == total) break;
      err_max = std::max(err_max, err);

      const RowVector d = eval_disturbance(s, t, rng);
      const RowVector y = truth.theta.transpose() * omega + d;
      const Matrix omega_bar = lift(omega, t, t_i);
      const MixedRegression mixed = mix(filter, n);
      const EstimatorState next = estimator_step(est, mixed, omega, y, s.gains, s.dt);

      if (k % opts.log_stride == 0) {
        TraceRow row;
        row.t = t;
        row.theta_true = truth.theta;
        row.theta_hat = est.theta_hat;
        row.omega = omega.col(0);
        row.y = y;
        row.Omega = mixed.Omega;
        row.branch = next.branch;
        row.err_inst = err;
        row.interval = current.index;
        run.trace.rows.push_back(std::move(row));
      }
      if (opts.record_steps) {
        StepRecord rec;
        rec.t = t;
        rec.interval = current.index;
        rec.t_i = t_i;
        rec.Omega = mixed.Omega;
        rec.mu_norm = (mixed.Y - mixed.Omega * theta_at_ti).norm();
        rec.lifted_sq_norm = lifted_sq_norm(omega_bar);
        rec.gram_norm = filter.omega_f.norm();
        rec.err_inst = err;
        rec.branch = next.branch;
        run.steps.push_back(rec);
      }

      // Right end of the step: same interval, same held disturbance.
      const double t_next = static_cast<double>(k + 1) * s.dt;
      Matrix omega_next = eval_regressor(s, std::min(t_next, s.t_end));
      Truth truth_next = eval_truth(s, std::min(t_next, s.t_end));
      const RowVector y_next = truth_next.theta.transpose() * omega_next + d;
      filter = filter_step(filter, FilterInput{omega_bar, y},
                           FilterInput{lift(omega_next, t_next, t_i), y_next}, s.beta, s.dt);

      est = next;
      est.t = t_next;
      omega = std::move(omega_next);
      truth = std::move(truth_next);
    } catch (const NumericError& e) {
      throw NumericError(fmt::format("t = {:.17g}: {}", t, e.what()));
    } catch (const ContractError& e) {
      throw ContractError(fmt::format("t = {:.17g}: {}", t, e.what()));
    }
  }
  return run;
}

Scenario preset(std::string_view name) {
  if (name != "exp1" && name != "exp2") {
    throw ConfigError(fmt::format("unknown preset '{}' (expected exp1 or exp2)", name));
  }
  Scenario s;
  s.n = 2;
  s.m = 1;
  const double four_pi = 4.0 * std::numbers::pi;
  s.regressor = {Signal::sine(3.0, four_pi),
                 Signal::piecewise(10.0, Signal::constant(2.5), Signal::sine(2.5, four_pi))};
  s.theta = {Signal::sum({Signal::constant(2.0), Signal::sine(1.0, 1.0)}),
             Signal::sum({Signal::constant(3.0), Signal::cosine(1.0, 0.5)})};
  s.disturbance = name == "exp2" ? DisturbanceSpec::uniform(-0.5, 0.5) : DisturbanceSpec::none();
  s.t_end = 20.0;
  s.dt = 1e-4;
  s.seed = 1;
  s.grid = {0.25, 0.0};
  s.beta = 0.05 / s.grid.T;
  s.gains.gamma0 = 100.0;
  s.gains.Gamma = 0.75 * Matrix::Identity(2, 2);
  s.gains.sigma = 1e-4;
  s.gains.kappa = 1e-9;
  s.theta_hat0 = Vector::Zero(2);
  s.t_e = 10.0;
  return s;
}

double steady_state_error(const RunResult& run, double t_from, double t_to) {
  if (run.steps.empty()) throw DomainError("steady_state_error: run has no step records");
  double worst = 0.0;
  bool any = false;
  for (const StepRecord& r : run.steps) {
    if (r.t >= t_from && r.t < t_to) {
      worst = std::max(worst, r.err_inst);
      any = true;
    }
  }
  if (!any) throw DomainError(fmt::format("steady_state_error: no steps in [{}, {})", t_from, t_to));
  return worst;
}

std::vector<SweepPoint> sweep(const Scenario& base, SweepParam param, const std::vector<double>& values,
                              bool parallel) {
  auto one = [&base, param](double value, std::size_t index) {
    Scenario s = base;
    if (param == SweepParam::T) {
      const double ratio = value / base.grid.T;
      s.grid.T = value;
      s.beta = base.beta / ratio;
      s.gains.kappa = base.gains.kappa * std::pow(ratio, 4.0 * base.n);
    } else {
      s.gains.gamma0 = value;
    }
    RunOptions opts;
    opts.log_stride = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::llround(s.t_end / s.dt)));
    opts.noise_stream = index;
    const RunResult run = run_scenario(s, opts);

    SweepPoint p;
    p.value = value;
    p.beta = s.beta;
    p.kappa = s.gains.kappa;
    p.steady_state_error = steady_state_error(run, s.t_e - 2.0, s.t_e);
    p.final_error = run.steps.back().err_inst;
    std::int64_t fe = 0, drem = 0;
    for (const StepRecord& r : run.steps) {
      if (r.t >= s.grid.t_r_plus && r.t < s.t_e) {
        ++fe;
        drem += r.branch == Branch::Drem;
      }
    }
    p.drem_fraction = fe ? static_cast<double>(drem) / static_cast<double>(fe) : 0.0;
    return p;
  };

  std::vector<SweepPoint> out;
  if (parallel) {
    std::vector<std::future<SweepPoint>> jobs;
    for (std::size_t i = 0; i < values.size(); ++i) {
      jobs.push_back(std::async(std::launch::async, one, values[i], i));
    }
    for (auto& j : jobs) out.push_back(j.get());
  } else {
    for (std::size_t i = 0; i < values.size(); ++i) out.push_back(one(values[i], i));
  }
  return out;
}

std::string format_sweep(SweepParam param, const std::vector<SweepPoint>& points) {
  std::string out = fmt::format("{},beta,kappa,steady_state_error,final_error,drem_fraction\n",
                                param == SweepParam::T ? "T" : "gamma0");
  for (const SweepPoint& p : points) {
    out += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", p.value, p.beta, p.kappa,
                       p.steady_state_error, p.final_error, p.drem_fraction);
  }
  return out;
}

}  // namespace idrem
