#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "ctl/transform.hpp"
#include "oracles.hpp"

using Eigen::MatrixXd;

TEST_CASE("transform objective on identity blocks") {
  const ctl::Transform t = ctl::Transform::identity(2);
  const MatrixXd x = MatrixXd::Identity(2, 2);
  const auto value = ctl::transform_objective(t, x, x, 1.0);
  // ||I I - I||^2 = 0, regularizer = 1 * (2 - log 1) = 2.
  CHECK(value.fidelity == doctest::Approx(0.0));
  CHECK(value.regularizer == doctest::Approx(2.0));
  CHECK(value.total == doctest::Approx(2.0));
}

TEST_CASE("transform objective, 1x1 hand arithmetic") {
  ctl::Transform t{MatrixXd::Constant(1, 1, 2.0)};
  const MatrixXd x = MatrixXd::Constant(1, 1, 1.0);
  const MatrixXd z = MatrixXd::Constant(1, 1, 0.0);
  const auto value = ctl::transform_objective(t, x, z, 1.0);
  CHECK(value.fidelity == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(value.regularizer ==
        doctest::Approx(4.0 - std::log(2.0)).epsilon(1e-12));
  CHECK(value.total == doctest::Approx(4.0 + 4.0 - std::log(2.0)).epsilon(1e-12));
  CHECK(value.total == doctest::Approx(value.fidelity + value.regularizer)
                           .epsilon(1e-12));
}

TEST_CASE("zero and near-singular transforms are rejected") {
  CHECK_THROWS_AS(ctl::Transform{MatrixXd::Zero(2, 2)}, ctl::NumericError);
  MatrixXd nearly_singular = MatrixXd::Identity(2, 2);
  nearly_singular(1, 1) = 1e-13;
  CHECK_THROWS_AS(ctl::Transform{nearly_singular}, ctl::NumericError);
  nearly_singular(1, 1) = 1e-11;
  CHECK_NOTHROW(ctl::Transform{nearly_singular});
  CHECK_THROWS_AS(ctl::Transform{MatrixXd::Ones(2, 3)}, std::invalid_argument);
  MatrixXd with_nan = MatrixXd::Identity(2, 2);
  with_nan(0, 1) = std::nan("");
  CHECK_THROWS_AS(ctl::Transform{with_nan}, ctl::NumericError);
}

TEST_CASE("objective rejects bad arguments") {
  const ctl::Transform t = ctl::Transform::identity(2);
  const MatrixXd x = MatrixXd::Identity(2, 2);
  CHECK_THROWS_AS(ctl::transform_objective(t, x, MatrixXd::Zero(3, 2), 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(ctl::transform_objective(t, MatrixXd::Zero(3, 3), x, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(ctl::transform_objective(t, x, x, 0.0),
                  std::invalid_argument);
}

TEST_CASE("coefficient update is the plain product") {
  const MatrixXd x = oracles::random_matrix(4, 10, 11);
  SUBCASE("identity transform returns the data") {
    const MatrixXd z = ctl::update_coefficients(ctl::Transform::identity(4), x);
    CHECK((z - x).norm() == 0.0);
  }
  SUBCASE("diagonal transform scales rows") {
    ctl::Transform t{Eigen::Vector2d(2.0, 3.0).asDiagonal().toDenseMatrix()};
    const MatrixXd z = ctl::update_coefficients(t, MatrixXd::Identity(2, 2));
    CHECK(z(0, 0) == doctest::Approx(2.0));
    CHECK(z(1, 1) == doctest::Approx(3.0));
    CHECK(z(0, 1) == doctest::Approx(0.0));
  }
  SUBCASE("matches a triple-loop product and zeroes the fidelity") {
    ctl::Transform t{oracles::random_matrix(4, 4, 12)};
    const MatrixXd z = ctl::update_coefficients(t, x);
    CHECK((z - oracles::matmul_ref(t.matrix(), x)).norm() < 1e-12);
    CHECK(ctl::transform_objective(t, x, z, 0.5).fidelity == 0.0);
  }
}

TEST_CASE("closed-form update at vanishing regularization recovers identity") {
  const MatrixXd x = MatrixXd::Identity(3, 3);
  const ctl::Transform t = ctl::update_transform(x, x, 1e-12);
  CHECK((t.matrix() - x).norm() < 1e-9);
}

TEST_CASE("closed-form update on the identity instance hits the scalar root") {
  // Per-diagonal objective (t-1)^2 + t^2 - log t is minimized at the positive
  // root of 4t^2 - 2t - 1: t = (2 + sqrt(20)) / 8.
  const MatrixXd x = MatrixXd::Identity(2, 2);
  const ctl::Transform t = ctl::update_transform(x, x, 1.0);
  const double root = (2.0 + std::sqrt(20.0)) / 8.0;
  CHECK(std::abs(t.matrix()(0, 0) - root) < 1e-9);
  CHECK(std::abs(t.matrix()(1, 1) - root) < 1e-9);
  CHECK(std::abs(t.matrix()(0, 1)) < 1e-12);
  CHECK(std::abs(t.matrix()(1, 0)) < 1e-12);
}

TEST_CASE("closed-form update matches a gradient-descent oracle on Z = 0") {
  const MatrixXd x = oracles::random_matrix(3, 3, 21);
  const MatrixXd z = MatrixXd::Zero(3, 3);
  const double lambda = 0.5;
  const ctl::Transform closed = ctl::update_transform(x, z, lambda);
  const MatrixXd descent =
      oracles::gradient_descent_transform(x, z, lambda, 4000);
  const double closed_value =
      oracles::transform_objective_ref(closed.matrix(), x, z, lambda);
  const double descent_value =
      oracles::transform_objective_ref(descent, x, z, lambda);
  CHECK(closed_value <= descent_value + 1e-6);
}

TEST_CASE("closed-form update satisfies first-order optimality") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const MatrixXd x = oracles::random_matrix(4, 12, 100 + seed);
    const MatrixXd z = oracles::random_matrix(4, 12, 200 + seed);
    const double lambda = 0.25 + 0.25 * double(seed % 3);
    const ctl::Transform t = ctl::update_transform(x, z, lambda);
    const double residual =
        oracles::transform_gradient_ref(t.matrix(), x, z, lambda).norm();
    const double at_identity =
        oracles::transform_gradient_ref(MatrixXd::Identity(4, 4), x, z, lambda)
            .norm();
    CHECK(residual <= 1e-6 * (1.0 + at_identity));
  }
}

TEST_CASE("closed-form update dominates random perturbations") {
  const MatrixXd x = oracles::random_matrix(4, 16, 31);
  const MatrixXd z = oracles::random_matrix(4, 16, 32);
  const double lambda = 0.7;
  const ctl::Transform t = ctl::update_transform(x, z, lambda);
  const double at_optimum =
      oracles::transform_objective_ref(t.matrix(), x, z, lambda);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    MatrixXd delta = oracles::random_matrix(4, 4, 5000 + seed);
    delta /= delta.norm();
    const double perturbed = oracles::transform_objective_ref(
        t.matrix() + 1e-3 * delta, x, z, lambda);
    CHECK(at_optimum <= perturbed + 1e-12);
  }
}

TEST_CASE("analytic gradient matches central finite differences") {
  const MatrixXd x = oracles::random_matrix(4, 9, 41);
  const MatrixXd z = oracles::random_matrix(4, 9, 42);
  const double lambda = 0.3;
  MatrixXd base = oracles::random_matrix(4, 4, 43);
  base += 4.0 * MatrixXd::Identity(4, 4);  // keep the instance well-conditioned
  const ctl::Transform t{base};

  const MatrixXd analytic = ctl::transform_objective_gradient(t, x, z, lambda);
  const double h = 1e-5;
  MatrixXd numeric(4, 4);
  for (Eigen::Index i = 0; i < 4; ++i) {
    for (Eigen::Index j = 0; j < 4; ++j) {
      MatrixXd plus = base;
      MatrixXd minus = base;
      plus(i, j) += h;
      minus(i, j) -= h;
      numeric(i, j) =
          (ctl::transform_objective(ctl::Transform{plus}, x, z, lambda).total -
           ctl::transform_objective(ctl::Transform{minus}, x, z, lambda).total) /
          (2.0 * h);
    }
  }
  CHECK((analytic - numeric).norm() <= 1e-4 * numeric.norm());
}

TEST_CASE("update output is nonsingular even for adversarial coefficients") {
  // Zero coefficients push the fidelity toward T = 0; the regularizer's
  // spectral floor sqrt(lambda/2) keeps the result invertible.
  const MatrixXd x = oracles::random_matrix(5, 20, 51);
  const ctl::Transform t = ctl::update_transform(x, MatrixXd::Zero(5, 20), 0.1);
  Eigen::BDCSVD<MatrixXd> svd(t.matrix());
  CHECK(svd.singularValues()(4) > 1e-12 * svd.singularValues()(0));

  const ctl::Transform anti = ctl::update_transform(x, -x, 0.1);
  CHECK(std::isfinite(anti.log_abs_det()));
}

TEST_CASE("updater rejects non-finite data") {
  MatrixXd x = oracles::random_matrix(3, 6, 61);
  x(1, 2) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(ctl::update_transform(x, MatrixXd::Zero(3, 6), 1.0),
                  ctl::NumericError);
}
