#pragma once

#include <Eigen/Dense>

#include "ctl/errors.hpp"

namespace ctl {

// A transform is treated as singular when smin/smax falls below this.
inline constexpr double kSingularTol = 1e-12;

// Square nonsingular analysis basis. Validates on construction and caches
// log|det| (sum of log singular values), so objective evaluations never
// factorize again.
class Transform {
 public:
  explicit Transform(Eigen::MatrixXd entries);

  const Eigen::MatrixXd& matrix() const noexcept { return entries_; }
  Eigen::Index dim() const noexcept { return entries_.rows(); }
  double log_abs_det() const noexcept { return log_abs_det_; }

  static Transform identity(Eigen::Index k);

 private:
  Eigen::MatrixXd entries_;
  double log_abs_det_ = 0.0;
};

struct TransformObjective {
  double total = 0.0;
  double fidelity = 0.0;     // ||T X - Z||_F^2
  double regularizer = 0.0;  // lambda (||T||_F^2 - log|det T|)
};

// ||T X - Z||_F^2 + lambda (||T||_F^2 - log|det T|)
TransformObjective transform_objective(const Transform& transform,
                                       const Eigen::MatrixXd& data,
                                       const Eigen::MatrixXd& coefficients,
                                       double lambda);

// Gradient of the objective above with respect to T:
//   2 (T X - Z) X^T + 2 lambda T - lambda T^{-T}
Eigen::MatrixXd transform_objective_gradient(const Transform& transform,
                                             const Eigen::MatrixXd& data,
                                             const Eigen::MatrixXd& coefficients,
                                             double lambda);

// Coefficient update: the unconstrained minimizer Z = T X.
Eigen::MatrixXd update_coefficients(const Transform& transform,
                                    const Eigen::MatrixXd& data);

// Closed-form transform update reused across alternating-minimization sweeps:
// the Cholesky factor of X X^T + lambda I depends only on the data, so it is
// computed once here and reused for every coefficient matrix.
class TransformUpdater {
 public:
  // Keeps a reference to `data`; the caller owns it for the updater's lifetime.
  TransformUpdater(const Eigen::MatrixXd& data, double lambda);

  // T = 0.5 V (S + (S^2 + 2 lambda I)^{1/2}) U^T L^{-1}, where L L^T = X X^T +
  // lambda I and U S V^T is the full SVD of L^{-1} X Z^T. Exact minimizer of
  // the transform objective for fixed coefficients.
  Transform update(const Eigen::MatrixXd& coefficients) const;

  double lambda() const noexcept { return lambda_; }

 private:
  const Eigen::MatrixXd& data_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double lambda_;
};

// One-shot form of the update above.
Transform update_transform(const Eigen::MatrixXd& data,
                           const Eigen::MatrixXd& coefficients, double lambda);

}  // namespace ctl
