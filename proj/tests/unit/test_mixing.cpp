#include <doctest.h>

#include <cmath>
#include <random>

#include "idrem/filter.hpp"
#include "idrem/mixing.hpp"
#include "oracles.hpp"

using namespace idrem;

namespace {

Matrix m22(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

FilterState state_with(const Matrix& omega_f, const Vector& y_f) {
  FilterState st = FilterState::zero(static_cast<int>(y_f.size()));
  st.omega_f = omega_f;
  st.y_f = y_f;
  return st;
}

}  // namespace

TEST_CASE("determinant of c I is c^k") {
  for (int k = 1; k <= 8; ++k) {
    CHECK(determinant(1.5 * Matrix::Identity(k, k)) == doctest::Approx(std::pow(1.5, k)).epsilon(1e-14));
  }
}

TEST_CASE("determinant and adjugate of [[2,1],[1,2]]") {
  const Matrix a = m22(2, 1, 1, 2);
  CHECK(determinant(a) == 3.0);
  CHECK(adjugate(a) == m22(2, -1, -1, 2));
}

TEST_CASE("adjugate of the identity is the identity") {
  for (int k = 1; k <= 8; ++k) CHECK(adjugate(Matrix::Identity(k, k)).isIdentity(1e-15));
}

TEST_CASE("determinant of random SPD 4x4 matches an LU oracle") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const Matrix a = oracle::random_spd(4, rng);
    const double ref = oracle::lu_det(a);
    CHECK(std::abs(determinant(a) - ref) <= 1e-10 * std::abs(ref));
  }
}

TEST_CASE("adjugate of a rank-1 matrix vanishes for k >= 3") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int k = 3; k <= 8; ++k) {
    const Vector v = Vector::NullaryExpr(k, [&] { return u(rng); });
    const Matrix a = v * v.transpose();
    const Matrix adj = adjugate(a);
    CHECK(oracle::cofactor_adjugate(a).cwiseAbs().maxCoeff() <= 1e-12 * std::pow(v.squaredNorm(), k - 1));
    CHECK(adj.cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, std::pow(v.squaredNorm(), k - 1)));
  }
}

TEST_CASE("adjugate matches the cofactor oracle on random matrices") {
  std::mt19937_64 rng(29);
  for (int k = 1; k <= 6; ++k) {
    for (int trial = 0; trial < 20; ++trial) {
      const Matrix a = oracle::random_symmetric(k, rng);
      const Matrix ref = oracle::cofactor_adjugate(a);
      CHECK((adjugate(a) - ref).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, ref.cwiseAbs().maxCoeff()));
      CHECK(determinant(a) == doctest::Approx(oracle::laplace_det(a)).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("adjugate is defined for singular and non-symmetric matrices") {
  Matrix a(3, 3);
  a << 1, 2, 3, 4, 5, 6, 7, 8, 9;
  CHECK(std::abs(determinant(a)) < 1e-12);
  CHECK((adjugate(a) - oracle::cofactor_adjugate(a)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((adjugate(a) * a).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("non-square input is a domain error") {
  CHECK_THROWS_AS(determinant(Matrix::Zero(2, 3)), DomainError);
  CHECK_THROWS_AS(adjugate(Matrix(0, 0)), DomainError);
}

TEST_CASE("property: adj(A) A = det(A) I on random symmetric matrices") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = 2 + trial % 7;
    const Matrix a = oracle::random_symmetric(k, rng, 2.0);
    const DetAdj da = faddeev_leverrier(a);
    const double scale = std::pow(std::max(1.0, a.norm()), k);
    const Matrix resid = da.adj * a - da.det * Matrix::Identity(k, k);
    REQUIRE(resid.cwiseAbs().maxCoeff() <= 1e-9 * scale);
  }
}

TEST_CASE("mix with identity Gram") {
  Vector v(4);
  v << 1, 2, 3, 4;
  const MixedRegression mr = mix(state_with(Matrix::Identity(4, 4), v), 2);
  CHECK(mr.Omega == 1.0);
  CHECK(mr.Y_bar == v);
  CHECK(mr.Y.size() == 2);
  CHECK(mr.Y(0) == 1.0);
  CHECK(mr.Y(1) == 2.0);
}

TEST_CASE("mix with zero Gram") {
  const MixedRegression mr = mix(state_with(Matrix::Zero(4, 4), Vector::Ones(4)), 2);
  CHECK(mr.Omega == 0.0);
  CHECK(mr.Y_bar.isZero(0.0));
}

TEST_CASE("mix of a rank-1 Gram gives Omega = 0") {
  Vector v(4);
  v << 1.0, -2.0, 0.5, 3.0;
  const MixedRegression mr = mix(state_with(0.25 * v * v.transpose(), 0.5 * v), 2);
  CHECK(mr.Omega == 0.0);
  CHECK(mr.Y_bar.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("mix clamps tiny negative determinants and rejects large ones") {
  Matrix a = Matrix::Identity(4, 4);
  a(3, 3) = -1e-12;
  const MixedRegression mr = mix(state_with(a, Vector::Ones(4)), 2);
  CHECK(mr.Omega == 0.0);
  a(3, 3) = -0.5;
  CHECK_THROWS_AS(mix(state_with(a, Vector::Ones(4)), 2), NumericError);
  CHECK(mixing_tolerance(Matrix::Zero(4, 4)) == 1e-9);
  CHECK(mixing_tolerance(2.0 * Matrix::Identity(4, 4)) == doctest::Approx(1e-9 * 256.0));
}

TEST_CASE("mix rejects a dimension mismatch") {
  CHECK_THROWS_AS(mix(state_with(Matrix::Identity(4, 4), Vector::Ones(4)), 3), DomainError);
}

TEST_CASE("mix recovers the parameter from a consistent regression") {
  // y_f = omega_f theta exactly, so Y_bar = det * theta.
  std::mt19937_64 rng(37);
  const Matrix g = oracle::random_spd(4, rng);
  Vector theta(4);
  theta << 2.0, 4.0, 1.0, 0.0;
  const MixedRegression mr = mix(state_with(g, g * theta), 2);
  CHECK((mr.Y / mr.Omega - theta.head(2)).norm() < 1e-10);
}

TEST_CASE("extreme eigenvalue examples") {
  Matrix d = Matrix::Zero(2, 2);
  d.diagonal() << 1.0, 3.0;
  EigenRange r = min_max_eigenvalues(d);
  CHECK(r.min == 1.0);
  CHECK(r.max == 3.0);
  r = min_max_eigenvalues(m22(2, 1, 1, 2));
  CHECK(r.min == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.max == doctest::Approx(3.0).epsilon(1e-12));
  r = min_max_eigenvalues(Matrix::Zero(3, 3));
  CHECK(r.min == 0.0);
  CHECK(r.max == 0.0);
}

TEST_CASE("extreme eigenvalues match the inertia-bisection oracle") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 2 + trial % 7;
    const Matrix a = oracle::random_symmetric(k, rng, 3.0);
    const EigenRange r = min_max_eigenvalues(a);
    CHECK(r.min == doctest::Approx(oracle::bisect_eigenvalue(a, 0)).epsilon(1e-8).scale(1.0));
    CHECK(r.max == doctest::Approx(oracle::bisect_eigenvalue(a, k - 1)).epsilon(1e-8).scale(1.0));
  }
}

TEST_CASE("extreme eigenvalues reject non-symmetric input") {
  CHECK_THROWS_AS(min_max_eigenvalues(m22(1, 2, 0, 1)), DomainError);
  CHECK_THROWS_AS(min_max_eigenvalues(Matrix::Zero(2, 3)), DomainError);
}
