#include "idrem/mixing.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace idrem {

DetAdj faddeev_leverrier(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw DomainError(fmt::format("faddeev_leverrier: need a non-empty square matrix, got {}x{}",
                                  a.rows(), a.cols()));
  }
  const auto k = a.rows();
  Matrix m = Matrix::Identity(k, k);  // M_1 = A*0 + c_k I, c_k = 1
  double c = 0.0;
  for (Eigen::Index j = 1;; ++j) {
    const Matrix am = a * m;
    c = -am.trace() / static_cast<double>(j);
    if (j == k) break;
    m = am;
    m.diagonal().array() += c;
  }
  // c now holds c_0; m holds M_k.
  const bool odd = (k % 2) == 1;
  DetAdj out;
  out.det = odd ? -c : c;
  out.adj = odd ? m : (-m).eval();
  return out;
}

double determinant(const Matrix& a) { return faddeev_leverrier(a).det; }

Matrix adjugate(const Matrix& a) { return faddeev_leverrier(a).adj; }

double mixing_tolerance(const Matrix& omega_f) {
  return 1e-9 * std::max(1.0, std::pow(omega_f.norm(), static_cast<double>(omega_f.rows())));
}

MixedRegression mix(const FilterState& state, int n) {
  if (state.dim() != 2 * n || state.omega_f.rows() != 2 * n) {
    throw DomainError(fmt::format("mix: filter dimension {} does not match 2n = {}", state.dim(), 2 * n));
  }
  DetAdj da = faddeev_leverrier(state.omega_f);
  if (!std::isfinite(da.det)) throw NumericError("mix: non-finite determinant");
  const double tol = mixing_tolerance(state.omega_f);
  if (da.det < -tol) {
    throw NumericError(fmt::format(
        "mix: det(omega_f) = {:.6e} below -{:.3e}; filtered Gram is not PSD", da.det, tol));
  }
  MixedRegression out;
  out.Omega = std::max(da.det, 0.0);
  out.Y_bar = da.adj * state.y_f;
  out.Y = out.Y_bar.head(n);
  return out;
}

EigenRange min_max_eigenvalues(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw DomainError("min_max_eigenvalues: need a non-empty square matrix");
  }
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw DomainError("min_max_eigenvalues: matrix is not symmetric");
  }
  Matrix s = 0.5 * (a + a.transpose());
  const auto k = s.rows();
  const double target = 1e-10 * s.norm();

  auto off_norm = [&] {
    double acc = 0.0;
    for (Eigen::Index p = 0; p < k; ++p) {
      for (Eigen::Index q = p + 1; q < k; ++q) acc += 2.0 * s(p, q) * s(p, q);
    }
    return std::sqrt(acc);
  };

  for (int sweep = 0; sweep < 100 && off_norm() > target; ++sweep) {
    for (Eigen::Index p = 0; p < k - 1; ++p) {
      for (Eigen::Index q = p + 1; q < k; ++q) {
        const double apq = s(p, q);
        if (apq == 0.0) continue;
        // Rotation angle zeroing s(p, q) (Golub & Van Loan, symmetric Schur).
        const double tau = (s(q, q) - s(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * c;
        for (Eigen::Index r = 0; r < k; ++r) {
          const double srp = s(r, p), srq = s(r, q);
          s(r, p) = c * srp - sn * srq;
          s(r, q) = sn * srp + c * srq;
        }
        for (Eigen::Index r = 0; r < k; ++r) {
          const double spr = s(p, r), sqr = s(q, r);
          s(p, r) = c * spr - sn * sqr;
          s(q, r) = sn * spr + c * sqr;
        }
        s(p, q) = s(q, p) = 0.0;
      }
    }
  }
  const Vector d = s.diagonal();
  return {d.minCoeff(), d.maxCoeff()};
}

}  // namespace idrem
