#include "idrem/filter.hpp"

#include <fmt/format.h>

namespace idrem {

FilterState FilterState::zero(int dim, double width) {
  FilterState s;
  s.omega_f = Matrix::Zero(dim, dim);
  s.y_f = Vector::Zero(dim);
  s.width = width;
  return s;
}

FilterState filter_reset(FilterState state, double t_i) {
  state.omega_f.setZero();
  state.y_f.setZero();
  state.t_i = t_i;
  state.elapsed = 0.0;
  return state;
}

FilterState filter_step(const FilterState& state, const FilterInput& start, const FilterInput& end,
                        double beta, double dt) {
  if (!(dt > 0.0)) throw ContractError("filter_step: dt must be > 0");
  const double next = state.elapsed + dt;
  if (state.width > 0.0 && next > state.width * (1.0 + 1e-9)) {
    throw ContractError(fmt::format(
        "filter_step: step to t_i + {} crosses the grid boundary t_i + {} (t_i = {})", next,
        state.width, state.t_i));
  }
  const double w0 = 0.5 * dt * forgetting_weight(beta, state.elapsed);
  const double w1 = 0.5 * dt * forgetting_weight(beta, next);

  FilterState out = state;
  out.omega_f.noalias() += w0 * start.omega_bar * start.omega_bar.transpose();
  out.omega_f.noalias() += w1 * end.omega_bar * end.omega_bar.transpose();
  out.omega_f = 0.5 * (out.omega_f + out.omega_f.transpose()).eval();
  out.y_f.noalias() += w0 * start.omega_bar * start.y.transpose();
  out.y_f.noalias() += w1 * end.omega_bar * end.y.transpose();
  out.elapsed = next;
  return out;
}

}  // namespace idrem
