#pragma once

// Independent reference computations used as oracles. These deliberately
// avoid the library's implementation paths: objectives and gradients are
// evaluated from scratch, linear systems go through QR instead of normal
// equations, and products are naive triple loops.

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace oracles {

inline double log_abs_det(const Eigen::MatrixXd& m) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  return lu.matrixLU().diagonal().array().abs().log().sum();
}

// ||T X - Z||_F^2 + lambda (||T||_F^2 - log|det T|), +inf when T is
// effectively singular (keeps line searches away from the log barrier).
inline double transform_objective_ref(const Eigen::MatrixXd& t,
                                      const Eigen::MatrixXd& x,
                                      const Eigen::MatrixXd& z, double lambda) {
  const double lad = log_abs_det(t);
  if (!std::isfinite(lad)) {
    return std::numeric_limits<double>::infinity();
  }
  return (t * x - z).squaredNorm() + lambda * (t.squaredNorm() - lad);
}

// 2 (T X - Z) X^T + 2 lambda T - lambda T^{-T}
inline Eigen::MatrixXd transform_gradient_ref(const Eigen::MatrixXd& t,
                                              const Eigen::MatrixXd& x,
                                              const Eigen::MatrixXd& z,
                                              double lambda) {
  const Eigen::MatrixXd inv_t = t.partialPivLu().inverse();
  return 2.0 * (t * x - z) * x.transpose() + 2.0 * lambda * t -
         lambda * inv_t.transpose();
}

// Gradient descent with Armijo backtracking on the transform objective.
inline Eigen::MatrixXd gradient_descent_transform(const Eigen::MatrixXd& x,
                                                  const Eigen::MatrixXd& z,
                                                  double lambda, int steps) {
  Eigen::MatrixXd t =
      Eigen::MatrixXd::Identity(x.rows(), x.rows());
  double value = transform_objective_ref(t, x, z, lambda);
  for (int i = 0; i < steps; ++i) {
    const Eigen::MatrixXd grad = transform_gradient_ref(t, x, z, lambda);
    const double grad_norm2 = grad.squaredNorm();
    if (grad_norm2 == 0.0) {
      break;
    }
    double step = 1.0;
    while (step > 1e-18) {
      const Eigen::MatrixXd candidate = t - step * grad;
      const double candidate_value =
          transform_objective_ref(candidate, x, z, lambda);
      if (candidate_value <= value - 1e-4 * step * grad_norm2) {
        t = candidate;
        value = candidate_value;
        break;
      }
      step *= 0.5;
    }
  }
  return t;
}

inline Eigen::MatrixXd matmul_ref(const Eigen::MatrixXd& a,
                                  const Eigen::MatrixXd& b) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index k = 0; k < a.cols(); ++k) {
      for (Eigen::Index j = 0; j < b.cols(); ++j) {
        c(i, j) += a(i, k) * b(k, j);
      }
    }
  }
  return c;
}

// min_Z ||stacked_system Z - stacked_rhs||_F column by column, via QR.
inline Eigen::MatrixXd stacked_least_squares(const Eigen::MatrixXd& system,
                                             const Eigen::MatrixXd& rhs) {
  return system.colPivHouseholderQr().solve(rhs);
}

struct StatsRef {
  double mean = 0.0;
  double std_dev = 0.0;
  double max = 0.0;
  double min = 0.0;
};

// Two-pass reference in long double.
inline StatsRef two_pass_stats(const std::vector<double>& values) {
  StatsRef s;
  long double sum = 0.0L;
  s.min = values.front();
  s.max = values.front();
  for (double v : values) {
    sum += v;
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  }
  const long double mean = sum / static_cast<long double>(values.size());
  long double ss = 0.0L;
  for (double v : values) {
    const long double d = v - mean;
    ss += d * d;
  }
  s.mean = static_cast<double>(mean);
  s.std_dev = values.size() > 1
                  ? static_cast<double>(
                        std::sqrt(ss / static_cast<long double>(values.size() - 1)))
                  : 0.0;
  return s;
}

// Cyclic coordinate descent on 0.5||y - A a||^2 + gamma |a|_1.
inline Eigen::VectorXd coordinate_descent_lasso(const Eigen::MatrixXd& a,
                                                const Eigen::VectorXd& y,
                                                double gamma, int sweeps) {
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(a.cols());
  Eigen::VectorXd residual = y;
  const Eigen::VectorXd col_norms2 = a.colwise().squaredNorm();
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (col_norms2(j) == 0.0) {
        continue;
      }
      const double old = alpha(j);
      const double rho = a.col(j).dot(residual) + col_norms2(j) * old;
      const double mag = std::abs(rho) - gamma;
      const double updated =
          mag > 0.0 ? (rho < 0.0 ? -mag : mag) / col_norms2(j) : 0.0;
      if (updated != old) {
        residual += a.col(j) * (old - updated);
        alpha(j) = updated;
      }
    }
  }
  return alpha;
}

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols,
                                     std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      m(i, j) = normal(rng);
    }
  }
  return m;
}

}  // namespace oracles
