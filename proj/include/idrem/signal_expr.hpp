#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace idrem {

/// Scalar time signal built from a small closed set of primitives, with
/// analytic first and second derivatives.
///
/// Text form (used in config files):
///
///     expr      := term ('+' term)*
///     term      := number | call
///     number    := float literal, optionally suffixed with `pi` (`4pi`, `0.5pi`, `pi`)
///     call      := const(c)
///                | sin(amp, rate, phase)        amp * sin(rate * t + phase)
///                | cos(amp, rate, phase)        amp * cos(rate * t + phase)
///                | sum(expr, expr, ...)
///                | piecewise(t_switch, before, after)   `after` applies for t >= t_switch
///                | table(t0:v0, t1:v1, ...)     zero-order hold, v0 before t0
///
/// `piecewise` and `table` have zero derivatives at their switching instants
/// (one-sided derivative of the active branch is used).
class Signal {
 public:
  struct Value {
    double f = 0.0;
    double df = 0.0;
    double ddf = 0.0;
  };

  Signal() = default;

  static Signal constant(double c);
  static Signal sine(double amplitude, double rate, double phase = 0.0);
  static Signal cosine(double amplitude, double rate, double phase = 0.0);
  static Signal sum(std::vector<Signal> terms);
  static Signal piecewise(double t_switch, Signal before, Signal after);
  static Signal table(std::vector<std::pair<double, double>> points);

  /// Throws ConfigError with the offending text on malformed input.
  static Signal parse(std::string_view text);

  /// A single numeric literal in the same syntax (`0.25`, `-1e-4`, `4pi`).
  static double parse_number(std::string_view text);

  [[nodiscard]] Value eval(double t) const;
  [[nodiscard]] double operator()(double t) const { return eval(t).f; }

  /// Canonical text form; `parse(to_string())` reproduces the signal bit-exactly.
  [[nodiscard]] std::string to_string() const;

 private:
  enum class Kind { Constant, Sine, Cosine, Sum, Piecewise, Table };

  Kind kind_ = Kind::Constant;
  double a_ = 0.0;  // constant value / amplitude / switch time
  double b_ = 0.0;  // rate
  double c_ = 0.0;  // phase
  std::vector<Signal> children_;
  std::vector<std::pair<double, double>> points_;
};

}  // namespace idrem
