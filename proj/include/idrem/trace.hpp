#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "idrem/estimator.hpp"
#include "idrem/signals.hpp"
#include "idrem/types.hpp"

namespace idrem {

/// One logged row of a run (CSV line).
struct TraceRow {
  double t = 0.0;
  Vector theta_true;
  Vector theta_hat;
  Vector omega;  // first column of omega
  RowVector y;
  double Omega = 0.0;
  Branch branch = Branch::SigmaMod;
  double err_inst = 0.0;
  std::int64_t interval = 0;
};

/// Full-rate record used by audits.
struct StepRecord {
  double t = 0.0;
  std::int64_t interval = 0;
  double t_i = 0.0;
  double Omega = 0.0;
  double mu_norm = 0.0;          // ||Y - Omega * Theta(t_i)||
  double lifted_sq_norm = 0.0;   // lambda_max(omega_bar omega_bar^T)
  double gram_norm = 0.0;        // ||omega_f||_F
  double err_inst = 0.0;
  Branch branch = Branch::SigmaMod;
};

/// State at the end of interval i, i.e. at t_i + T.
struct IntervalRecord {
  std::int64_t index = 0;
  double t_start = 0.0;
  double t_end = 0.0;
  Vector theta_hat_end;
  Vector theta_true_end;
  Vector theta_true_start;
  double err_end = 0.0;        // ||theta_hat(t_i + T) - Theta(t_i + T)||
  double err_frozen = 0.0;     // ||theta_hat(t_i + T) - Theta(t_i)||
  double err_max = 0.0;        // max over the interval of the instantaneous error
};

struct Trace {
  int n = 0;
  int m = 0;
  std::vector<TraceRow> rows;
};

struct RunResult {
  Scenario scenario;
  Trace trace;
  std::vector<StepRecord> steps;
  std::vector<IntervalRecord> intervals;
};

/// Header: t,theta_true0..,theta_hat0..,omega0..,y (or y0..),Omega,branch,err_inst,interval.
/// Floats at 17 significant digits; branch written as 1 (DREM) or 0 (sigma-mod).
std::string csv_header(int n, int m);
void write_csv(const Trace& trace, std::ostream& out);
/// Throws std::runtime_error naming the path on I/O failure.
void write_csv(const Trace& trace, const std::string& path);
/// Inverse of write_csv; throws ConfigError on a malformed file.
Trace read_csv(std::istream& in);

}  // namespace idrem
