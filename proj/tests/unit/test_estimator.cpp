#include <doctest.h>

#include <cmath>
#include <limits>

#include "idrem/estimator.hpp"
#include "idrem/mixing.hpp"

using namespace idrem;

namespace {

EstimatorGains gains(int n, double gamma0 = 100.0, double kappa = 1e-9) {
  EstimatorGains g;
  g.gamma0 = gamma0;
  g.Gamma = 0.75 * Matrix::Identity(n, n);
  g.sigma = 1e-4;
  g.kappa = kappa;
  return g;
}

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

MixedRegression mixed(double Omega, const Vector& Y) {
  MixedRegression m;
  m.Omega = Omega;
  m.Y = Y;
  m.Y_bar = Vector::Zero(2 * Y.size());
  m.Y_bar.head(Y.size()) = Y;
  return m;
}

}  // namespace

TEST_CASE("sigma branch with no regressor is pure leakage") {
  const EstimatorGains g = gains(2);
  const Vector v = vec2(1.5, -2.0);
  const EstimatorRate r = estimator_rhs(v, 0.0, Vector::Zero(2), Matrix::Zero(2, 1), RowVector::Zero(1), g);
  CHECK(r.branch == Branch::SigmaMod);
  CHECK((r.dtheta - (-g.sigma * g.Gamma * v)).norm() == 0.0);
}

TEST_CASE("DREM fixed point") {
  const Vector v = vec2(0.3, 0.7);
  const EstimatorRate r = estimator_rhs(v, 1.0, v, Matrix::Zero(2, 1), RowVector::Zero(1), gains(2));
  CHECK(r.branch == Branch::Drem);
  CHECK(r.dtheta.isZero(0.0));
}

TEST_CASE("DREM branch by direct substitution") {
  const EstimatorRate r =
      estimator_rhs(vec2(1, 0), 2.0, vec2(4, 0), Matrix::Zero(2, 1), RowVector::Zero(1), gains(2, 100.0, 1.0));
  CHECK(r.branch == Branch::Drem);
  CHECK(r.dtheta(0) == doctest::Approx(100.0).epsilon(1e-15));
  CHECK(r.dtheta(1) == 0.0);
}

TEST_CASE("branch switches exactly at kappa") {
  const EstimatorGains g = gains(2, 100.0, 1e-9);
  const auto at = [&](double Omega) {
    return estimator_rhs(vec2(1, 1), Omega, vec2(0, 0), Matrix::Ones(2, 1), RowVector::Ones(1), g).branch;
  };
  CHECK(at(1e-9) == Branch::Drem);
  CHECK(at(std::nextafter(1e-9, 0.0)) == Branch::SigmaMod);
  CHECK(at(0.0) == Branch::SigmaMod);
}

TEST_CASE("sigma branch with a regressor matches the gradient formula") {
  const EstimatorGains g = gains(2);
  Matrix w(2, 1);
  w << 3.0, 2.5;
  const Vector th = vec2(1.0, 2.0);
  const RowVector y = RowVector::Constant(1, 10.0);
  const EstimatorRate r = estimator_rhs(th, 0.0, Vector::Zero(2), w, y, g);
  const double err = th.dot(w.col(0)) - 10.0;  // 3 + 5 - 10 = -2
  const Vector expect = -0.75 * w.col(0) * err - g.sigma * 0.75 * th;
  CHECK((r.dtheta - expect).norm() < 1e-15);
}

TEST_CASE("non-finite inputs are numeric errors") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  const EstimatorGains g = gains(2);
  CHECK_THROWS_AS(estimator_rhs(vec2(nan, 0), 0.0, vec2(0, 0), Matrix::Zero(2, 1), RowVector::Zero(1), g), NumericError);
  CHECK_THROWS_AS(estimator_rhs(vec2(0, 0), inf, vec2(0, 0), Matrix::Zero(2, 1), RowVector::Zero(1), g), NumericError);
  CHECK_THROWS_AS(estimator_rhs(vec2(0, 0), 1.0, vec2(nan, 0), Matrix::Zero(2, 1), RowVector::Zero(1), g), NumericError);
  CHECK_THROWS_AS(estimator_rhs(vec2(0, 0), 0.0, vec2(0, 0), Matrix::Zero(2, 1), RowVector::Constant(1, nan), g),
                  NumericError);
}

TEST_CASE("zero rate leaves the estimate unchanged") {
  EstimatorState st{vec2(0.3, 0.7), Branch::SigmaMod, 0.0};
  const EstimatorState next = estimator_step(st, mixed(1.0, vec2(0.3, 0.7)), Matrix::Zero(2, 1), RowVector::Zero(1),
                                             gains(2), 1e-3);
  CHECK(next.theta_hat == st.theta_hat);
  CHECK(next.branch == Branch::Drem);
  CHECK(next.t == doctest::Approx(1e-3));
}

TEST_CASE("sigma branch without regressor follows the closed-form decay") {
  EstimatorGains g = gains(2);
  g.sigma = 0.5;  // large enough for the decay to be visible
  g.Gamma << 1.0, 0.2, 0.2, 0.5;
  EstimatorState st{vec2(2.0, -1.0), Branch::SigmaMod, 0.0};
  const Vector x0 = st.theta_hat;
  const double dt = 1e-3;
  Eigen::SelfAdjointEigenSolver<Matrix> es(g.Gamma);
  for (int k = 1; k <= 5000; ++k) {
    st = estimator_step(st, mixed(0.0, vec2(0, 0)), Matrix::Zero(2, 1), RowVector::Zero(1), g, dt);
    if (k % 500 == 0) {
      const double t = k * dt;
      const Vector decay = (-g.sigma * t * es.eigenvalues().array()).exp();
      const Vector expect = es.eigenvectors() * decay.asDiagonal() * es.eigenvectors().transpose() * x0;
      REQUIRE((st.theta_hat - expect).cwiseAbs().maxCoeff() <= 1e-8);
    }
  }
  CHECK(st.branch == Branch::SigmaMod);
}

TEST_CASE("DREM branch converges to Y / Omega at rate gamma0") {
  for (double gamma0 : {10.0, 100.0}) {
    const EstimatorGains g = gains(2, gamma0, 1e-9);
    const double Omega = 3e-6;
    const Vector target = vec2(2.0, 4.0);
    EstimatorState st{vec2(0.0, 0.0), Branch::SigmaMod, 0.0};
    const double dt = 1e-4;
    const double horizon = 5.0 / gamma0;
    const int steps = static_cast<int>(std::lround(horizon / dt));
    const double e0 = (st.theta_hat - target).norm();
    for (int k = 1; k <= steps; ++k) {
      st = estimator_step(st, mixed(Omega, Omega * target), Matrix::Zero(2, 1), RowVector::Zero(1), g, dt);
      const double ratio = (st.theta_hat - target).norm() / (e0 * std::exp(-gamma0 * k * dt));
      REQUIRE(std::abs(ratio - 1.0) <= 0.01);
    }
  }
}

TEST_CASE("parameter error examples") {
  CHECK(parameter_error(vec2(1, 2), vec2(1, 2)) == 0.0);
  CHECK(parameter_error(vec2(1, 0), vec2(0, 0)) == 1.0);
  CHECK(parameter_error(vec2(3, 4), vec2(0, 0)) == 5.0);
}

TEST_CASE("gain validation") {
  CHECK_NOTHROW(gains(2).validate(2));
  EstimatorGains g = gains(2);
  g.gamma0 = 0.0;
  CHECK_THROWS_AS(g.validate(2), ConfigError);
  g = gains(2);
  g.sigma = -1.0;
  CHECK_THROWS_AS(g.validate(2), ConfigError);
  g = gains(2);
  g.kappa = 0.0;
  CHECK_THROWS_AS(g.validate(2), ConfigError);
  g = gains(2);
  g.Gamma(0, 1) = 0.3;
  CHECK_THROWS_AS(g.validate(2), ConfigError);
  g = gains(2);
  g.Gamma(1, 1) = -0.1;
  CHECK_THROWS_AS(g.validate(2), ConfigError);
  CHECK_THROWS_AS(gains(3).validate(2), ConfigError);
}

TEST_CASE("branch names") {
  CHECK(to_string(Branch::Drem) == "drem");
  CHECK(to_string(Branch::SigmaMod) == "sigma");
}
