#pragma once

#include "idrem/filter.hpp"
#include "idrem/types.hpp"

namespace idrem {

/// Determinant and adjugate from one Faddeev-LeVerrier pass.
///
/// With M_0 = 0, c_k = 1 and for j = 1..k
///   M_j = A M_{j-1} + c_{k-j+1} I,   c_{k-j} = -tr(A M_j) / j
/// one gets det(A) = (-1)^k c_0 and adj(A) = (-1)^{k-1} M_k. No division by
/// det(A) occurs, so singular inputs are fine.
struct DetAdj {
  double det = 0.0;
  Matrix adj;
};

DetAdj faddeev_leverrier(const Matrix& a);

double determinant(const Matrix& a);
Matrix adjugate(const Matrix& a);

struct MixedRegression {
  double Omega = 0.0;  // det(omega_f)
  Vector Y_bar;        // adj(omega_f) * y_f, length 2n
  Vector Y;            // first n entries of Y_bar
};

/// Clamp window for det(omega_f): values in [-tol, 0) are set to 0, with
/// tol = 1e-9 * max(1, ||omega_f||^{2n}) (Frobenius norm).
double mixing_tolerance(const Matrix& omega_f);

/// Throws NumericError if det(omega_f) < -mixing_tolerance(omega_f).
MixedRegression mix(const FilterState& state, int n);

struct EigenRange {
  double min = 0.0;
  double max = 0.0;
};

/// Extreme eigenvalues of a symmetric matrix via cyclic Jacobi rotations
/// (off-diagonal Frobenius norm driven below 1e-10 * ||A||_F, or to zero).
/// Throws DomainError if A deviates from symmetry by more than
/// 1e-9 * max(1, max|A_ij|).
EigenRange min_max_eigenvalues(const Matrix& a);

}  // namespace idrem
