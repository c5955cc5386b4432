#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "idrem/signals.hpp"

namespace idrem {

// Flat config: one `key = value` per line, `#` starts a comment, sections are
// dotted key prefixes.
//
//   n = 2                      m = 1 (default)
//   t_end = 20                 dt = 1e-4            seed = 1
//   beta = 0.2                 t_e = 10 (default t_end)
//   grid.T = 0.25              grid.t_r_plus = 0
//   gains.gamma0 = 100         gains.sigma = 1e-4   gains.kappa = 1e-9
//   gains.Gamma = 0.75         (scalar multiple of I, or n*n row-major list)
//   theta_hat0 = 0, 0          (default zeros)
//   regressor.<row> = <signal>          (m = 1)
//   regressor.<row>.<col> = <signal>    (any m)
//   theta.<row> = <signal>
//   disturbance = none | uniform(lo, hi) | <signal>
//
// Signals use the grammar documented on idrem::Signal.

/// Throws ConfigError naming the offending key.
Scenario parse_config(std::string_view text);
Scenario load_config(const std::string& path);

/// Inverse of parse_config.
std::string to_config(const Scenario& s);

}  // namespace idrem
