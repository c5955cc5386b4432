#include "idrem/signals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "idrem/mixing.hpp"

namespace idrem {

DisturbanceSpec DisturbanceSpec::uniform(double lo, double hi) {
  if (!(lo <= hi)) throw ConfigError(fmt::format("disturbance: uniform({}, {}) needs lo <= hi", lo, hi));
  DisturbanceSpec d;
  d.kind = Kind::Uniform;
  d.lo = lo;
  d.hi = hi;
  return d;
}

DisturbanceSpec DisturbanceSpec::from_signal(Signal s) {
  DisturbanceSpec d;
  d.kind = Kind::Tabulated;
  d.tabulated = std::move(s);
  return d;
}

double DisturbanceSpec::sup_abs(double t_end, double h) const {
  switch (kind) {
    case Kind::None:
      return 0.0;
    case Kind::Uniform:
      return std::max(std::abs(lo), std::abs(hi));
    case Kind::Tabulated: {
      double sup = 0.0;
      const auto n = static_cast<std::int64_t>(std::ceil(t_end / h));
      for (std::int64_t k = 0; k <= n; ++k) {
        sup = std::max(sup, std::abs(tabulated(std::min(t_end, static_cast<double>(k) * h))));
      }
      return sup;
    }
  }
  return 0.0;
}

void Scenario::validate() const {
  if (n < 1) throw ConfigError("n: must be a positive integer");
  if (m < 1) throw ConfigError("m: must be a positive integer");
  if (m > n) throw ConfigError("m: must not exceed n");
  if (static_cast<int>(regressor.size()) != n * m) {
    throw ConfigError(fmt::format("regressor: expected {} entries, got {}", n * m, regressor.size()));
  }
  if (static_cast<int>(theta.size()) != n) {
    throw ConfigError(fmt::format("theta: expected {} entries, got {}", n, theta.size()));
  }
  if (!(dt > 0.0)) throw ConfigError("dt: must be > 0");
  if (!(t_end > 0.0)) throw ConfigError("t_end: must be > 0");
  if (!(beta > 0.0)) throw ConfigError("beta: must be > 0");
  if (!(t_e > grid.t_r_plus) || t_e > t_end) {
    throw ConfigError("t_e: must lie in (grid.t_r_plus, t_end]");
  }
  grid.validate();
  gains.validate(n);
  if (theta_hat0.size() != n) throw ConfigError(fmt::format("theta_hat0: expected {} entries", n));
}

NoiseSource::NoiseSource(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

double NoiseSource::unit() {
  // 53 random mantissa bits -> [0, 1).
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

namespace {

void check_horizon(const Scenario& s, double t) {
  if (!(t >= 0.0 && t <= s.t_end)) {
    throw DomainError(fmt::format("t = {} outside the horizon [0, {}]", t, s.t_end));
  }
}

}  // namespace

Matrix eval_regressor(const Scenario& s, double t) {
  check_horizon(s, t);
  Matrix omega(s.n, s.m);
  for (int r = 0; r < s.n; ++r) {
    for (int c = 0; c < s.m; ++c) omega(r, c) = s.regressor[r * s.m + c](t);
  }
  return omega;
}

Truth eval_truth(const Scenario& s, double t) {
  check_horizon(s, t);
  Truth out{Vector(s.n), Vector(s.n), Vector(s.n)};
  for (int r = 0; r < s.n; ++r) {
    const Signal::Value v = s.theta[r].eval(t);
    out.theta[r] = v.f;
    out.theta_dot[r] = v.df;
    out.theta_ddot[r] = v.ddf;
  }
  return out;
}

RowVector eval_disturbance(const Scenario& s, double t, NoiseSource& rng) {
  RowVector d = RowVector::Zero(s.m);
  switch (s.disturbance.kind) {
    case DisturbanceSpec::Kind::None:
      break;
    case DisturbanceSpec::Kind::Uniform:
      for (int c = 0; c < s.m; ++c) {
        d[c] = s.disturbance.lo + (s.disturbance.hi - s.disturbance.lo) * rng.unit();
      }
      break;
    case DisturbanceSpec::Kind::Tabulated:
      d.setConstant(s.disturbance.tabulated(t));
      break;
  }
  return d;
}

Sample make_sample(const Scenario& s, double t, const RowVector& d) {
  Sample out;
  out.t = t;
  out.omega = eval_regressor(s, t);
  const Truth truth = eval_truth(s, t);
  out.theta_true = truth.theta;
  out.theta_dot_true = truth.theta_dot;
  out.d = d;
  out.y = truth.theta.transpose() * out.omega + d;
  return out;
}

std::pair<RowVector, Matrix> normalize(const RowVector& y, const Matrix& omega) {
  if (omega.cols() != 1 || y.size() != 1) {
    throw ConfigError("normalize: only m = 1 is supported");
  }
  const double ns = 1.0 / (1.0 + omega.squaredNorm());
  return {ns * y, ns * omega};
}

double spectral_norm(const Matrix& a) {
  if (a.cols() == 1) return a.norm();
  return std::sqrt(std::max(0.0, min_max_eigenvalues(a.transpose() * a).max));
}

SignalSuprema compute_suprema(const Scenario& s) {
  SignalSuprema sup;
  const double h = s.dt / 10.0;
  const auto steps = static_cast<std::int64_t>(std::llround(s.t_end / h));
  for (std::int64_t k = 0; k <= steps; ++k) {
    const double t = std::min(s.t_end, static_cast<double>(k) * h);
    sup.omega_max = std::max(sup.omega_max, spectral_norm(eval_regressor(s, t)));
    const Truth truth = eval_truth(s, t);
    sup.theta_max = std::max(sup.theta_max, truth.theta.norm());
    sup.theta_dot_max = std::max(sup.theta_dot_max, truth.theta_dot.norm());
    sup.theta_ddot_max = std::max(sup.theta_ddot_max, truth.theta_ddot.norm());
  }
  sup.d_max = std::sqrt(static_cast<double>(s.m)) * s.disturbance.sup_abs(s.t_end, h);
  return sup;
}

}  // namespace idrem
