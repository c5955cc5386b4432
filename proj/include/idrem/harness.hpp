#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "idrem/signals.hpp"
#include "idrem/trace.hpp"

namespace idrem {

struct RunOptions {
  std::int64_t log_stride = 10;
  bool record_steps = true;
  // When set, the disturbance stream is derived from (seed, noise_stream).
  std::optional<std::uint64_t> noise_stream;
};

/// Fixed-step simulation: at every step evaluate the signals, reset the
/// filter on a grid point, lift, mix, advance the estimator (RK4) and the
/// filter (trapezoid). Rows are logged at t_k = k*dt for k in [0, N), with
/// N = t_end / dt.
///
/// Throws ConfigError when dt does not divide T (or t_r_plus, or t_end) and
/// NumericError tagged with the timestamp on a numerical failure.
RunResult run_scenario(const Scenario& s, const RunOptions& opts = {});

/// Named presets: "exp1" (no disturbance) and "exp2" (uniform(-0.5, 0.5)).
/// Throws ConfigError on an unknown name.
Scenario preset(std::string_view name);

/// Max instantaneous error over [t_from, t_to) from the full-rate records.
double steady_state_error(const RunResult& run, double t_from, double t_to);

enum class SweepParam { T, Gamma0 };

struct SweepPoint {
  double value = 0.0;
  double steady_state_error = 0.0;
  double final_error = 0.0;
  double kappa = 0.0;
  double beta = 0.0;
  double drem_fraction = 0.0;  // share of FE-window steps on the DREM branch
};

/// Runs `base` once per value. For T, beta = (beta_ref * T_ref) / T and
/// kappa = kappa_ref * (T / T_ref)^{4n} so that kappa stays below the
/// in-interval level of Omega, whose scale goes like T^{4n}. Each run gets
/// its own noise stream derived from the base seed and the sweep index.
/// Steady-state error is taken over [t_e - 2, t_e).
std::vector<SweepPoint> sweep(const Scenario& base, SweepParam param,
                              const std::vector<double>& values, bool parallel = true);

std::string format_sweep(SweepParam param, const std::vector<SweepPoint>& points);

}  // namespace idrem
