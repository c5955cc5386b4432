#include "idrem/excitation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "idrem/lift.hpp"
#include "idrem/mixing.hpp"

namespace idrem {

RegressorTrace RegressorTrace::from_samples(double t0, double dt, std::vector<Matrix> samples) {
  RegressorTrace tr;
  tr.t0 = t0;
  tr.dt = dt;
  if (samples.size() < 2) return tr;
  tr.right.assign(samples.begin() + 1, samples.end());
  samples.pop_back();
  tr.left = std::move(samples);
  return tr;
}

int RegressorTrace::rows() const {
  return left.empty() ? 0 : static_cast<int>(left.front().rows());
}

namespace {

std::int64_t node_count(double t_a, double t_b, double dt) {
  return static_cast<std::int64_t>(std::llround((t_b - t_a) / dt));
}

// Node index of time t, rounded; throws when t is off the trace.
std::int64_t node_of(const RegressorTrace& tr, double t) {
  const double q = (t - tr.t0) / tr.dt;
  const auto j = static_cast<std::int64_t>(std::llround(q));
  if (j < 0 || j > static_cast<std::int64_t>(tr.segments())) {
    throw DomainError(fmt::format("time {} outside the trace [{}, {}]", t, tr.t0, tr.t_end()));
  }
  return j;
}

// P[j] = Gram over [t0, t0 + j*dt].
std::vector<Matrix> prefix_grams(const RegressorTrace& tr) {
  const int k = tr.rows();
  std::vector<Matrix> p;
  p.reserve(tr.segments() + 1);
  p.push_back(Matrix::Zero(k, k));
  for (std::size_t j = 0; j < tr.segments(); ++j) {
    Matrix next = p.back();
    next.noalias() += 0.5 * tr.dt * tr.left[j] * tr.left[j].transpose();
    next.noalias() += 0.5 * tr.dt * tr.right[j] * tr.right[j].transpose();
    p.push_back(std::move(next));
  }
  return p;
}

Matrix symmetric(const Matrix& a) { return 0.5 * (a + a.transpose()); }

}  // namespace

RegressorTrace sample_regressor(const Scenario& s, double t_a, double t_b) {
  const auto steps = node_count(t_a, t_b, s.dt);
  if (steps < 1) throw DomainError("sample_regressor: empty window");
  std::vector<Matrix> samples;
  samples.reserve(static_cast<std::size_t>(steps) + 1);
  for (std::int64_t j = 0; j <= steps; ++j) {
    samples.push_back(eval_regressor(s, std::min(s.t_end, t_a + static_cast<double>(j) * s.dt)));
  }
  return RegressorTrace::from_samples(t_a, s.dt, std::move(samples));
}

RegressorTrace sample_lifted_regressor(const Scenario& s, double t_a, double t_b) {
  const auto steps = node_count(t_a, t_b, s.dt);
  if (steps < 1) throw DomainError("sample_lifted_regressor: empty window");
  RegressorTrace tr;
  tr.t0 = t_a;
  tr.dt = s.dt;
  tr.left.reserve(static_cast<std::size_t>(steps));
  tr.right.reserve(static_cast<std::size_t>(steps));
  Matrix omega_next = eval_regressor(s, t_a);
  for (std::int64_t j = 0; j < steps; ++j) {
    const double t = t_a + static_cast<double>(j) * s.dt;
    const double t_next = std::min(s.t_end, t_a + static_cast<double>(j + 1) * s.dt);
    const double t_i = interval_index(t, s.grid).t_i;
    const Matrix omega = std::move(omega_next);
    omega_next = eval_regressor(s, t_next);
    tr.left.push_back(lift(omega, t, t_i));
    tr.right.push_back(lift(omega_next, t_next, t_i));
  }
  return tr;
}

Matrix gram(const RegressorTrace& trace, double t_a, double t_b) {
  if (trace.segments() == 0) throw DomainError("gram: empty trace");
  const auto ja = node_of(trace, t_a);
  const auto jb = node_of(trace, t_b);
  if (jb <= ja) throw DomainError(fmt::format("gram: empty window [{}, {}]", t_a, t_b));
  const int k = trace.rows();
  Matrix g = Matrix::Zero(k, k);
  for (auto j = ja; j < jb; ++j) {
    g.noalias() += 0.5 * trace.dt * trace.left[j] * trace.left[j].transpose();
    g.noalias() += 0.5 * trace.dt * trace.right[j] * trace.right[j].transpose();
  }
  return symmetric(g);
}

ExcitationLevels check_fe(const RegressorTrace& trace, double t_r_plus, double t_e, double Ts) {
  if (!(Ts > 0.0)) throw DomainError("check_fe: Ts must be > 0");
  if (t_e - t_r_plus < Ts * (1.0 - 1e-12)) {
    throw DomainError(fmt::format("check_fe: window [{}, {}] shorter than Ts = {}", t_r_plus, t_e, Ts));
  }
  const auto ja = node_of(trace, t_r_plus);
  const auto jb = node_of(trace, t_e);
  const auto width = static_cast<std::int64_t>(std::llround(Ts / trace.dt));
  if (width < 1) throw DomainError("check_fe: Ts below the trace resolution");

  const std::vector<Matrix> p = prefix_grams(trace);
  ExcitationLevels out;
  out.t_r_plus = t_r_plus;
  out.t_e = t_e;
  out.Ts = Ts;
  const EigenRange full = min_max_eigenvalues(symmetric(p[jb] - p[ja]));
  out.alpha1 = full.min;
  out.lambda_max = full.max;

  out.alpha2 = std::numeric_limits<double>::infinity();
  for (auto j = ja; j + width <= jb; ++j) {
    const double lmin = min_max_eigenvalues(symmetric(p[j + width] - p[j])).min;
    if (lmin < out.alpha2) {
      out.alpha2 = lmin;
      out.alpha2_start = trace.t0 + static_cast<double>(j) * trace.dt;
    }
  }
  const double floor = kExcitationRelTol * std::max(out.lambda_max, 0.0);
  out.satisfied = out.alpha1 > floor && out.alpha2 > floor && out.lambda_max > 0.0;
  return out;
}

ExcitationReport excitation_report(const Scenario& s, double t_r_plus, double t_e, double Ts) {
  ExcitationReport r;
  r.raw = check_fe(sample_regressor(s, t_r_plus, t_e), t_r_plus, t_e, Ts);
  r.lifted = check_fe(sample_lifted_regressor(s, t_r_plus, t_e), t_r_plus, t_e, Ts);
  return r;
}

namespace {

void append_levels(std::string& out, const std::string& prefix, const ExcitationLevels& l) {
  out += fmt::format("{}.t_r_plus = {:.17g}\n", prefix, l.t_r_plus);
  out += fmt::format("{}.t_e = {:.17g}\n", prefix, l.t_e);
  out += fmt::format("{}.Ts = {:.17g}\n", prefix, l.Ts);
  out += fmt::format("{}.alpha1 = {:.17g}\n", prefix, l.alpha1);
  out += fmt::format("{}.alpha2 = {:.17g}\n", prefix, l.alpha2);
  out += fmt::format("{}.alpha2_start = {:.17g}\n", prefix, l.alpha2_start);
  out += fmt::format("{}.lambda_max = {:.17g}\n", prefix, l.lambda_max);
  out += fmt::format("{}.satisfied = {}\n", prefix, l.satisfied);
}

}  // namespace

std::string format_excitation(const ExcitationReport& report, const std::string& section) {
  std::string out;
  append_levels(out, section + ".raw", report.raw);
  if (report.lifted) append_levels(out, section + ".lifted", *report.lifted);
  return out;
}

}  // namespace idrem
