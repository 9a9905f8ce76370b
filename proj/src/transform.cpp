#include "ctl/transform.hpp"

#include <cmath>
#include <string>

namespace ctl {

namespace {

void check_same_shape(const Eigen::MatrixXd& data,
                      const Eigen::MatrixXd& coefficients) {
  if (data.rows() != coefficients.rows() || data.cols() != coefficients.cols()) {
    throw std::invalid_argument(
        "coefficient matrix is " + std::to_string(coefficients.rows()) + "x" +
        std::to_string(coefficients.cols()) + ", data is " +
        std::to_string(data.rows()) + "x" + std::to_string(data.cols()));
  }
}

void check_transform_applies(const Transform& transform,
                             const Eigen::MatrixXd& data) {
  if (transform.dim() != data.rows()) {
    throw std::invalid_argument(
        "transform dim " + std::to_string(transform.dim()) +
        " does not match data rows " + std::to_string(data.rows()));
  }
}

}  // namespace

Transform::Transform(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
    throw std::invalid_argument("transform must be square and non-empty, got " +
                                std::to_string(entries_.rows()) + "x" +
                                std::to_string(entries_.cols()));
  }
  if (!entries_.allFinite()) {
    throw NumericError("transform has non-finite entries");
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(entries_);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (!(smin > kSingularTol * smax)) {
    throw NumericError("transform is singular (smin/smax = " +
                       std::to_string(smax > 0.0 ? smin / smax : 0.0) + ")");
  }
  log_abs_det_ = sv.array().log().sum();
}

Transform Transform::identity(Eigen::Index k) {
  return Transform(Eigen::MatrixXd::Identity(k, k));
}

TransformObjective transform_objective(const Transform& transform,
                                       const Eigen::MatrixXd& data,
                                       const Eigen::MatrixXd& coefficients,
                                       double lambda) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("lambda must be positive");
  }
  check_transform_applies(transform, data);
  check_same_shape(data, coefficients);

  TransformObjective value;
  value.fidelity = (transform.matrix() * data - coefficients).squaredNorm();
  value.regularizer =
      lambda * (transform.matrix().squaredNorm() - transform.log_abs_det());
  value.total = value.fidelity + value.regularizer;
  return value;
}

Eigen::MatrixXd transform_objective_gradient(const Transform& transform,
                                             const Eigen::MatrixXd& data,
                                             const Eigen::MatrixXd& coefficients,
                                             double lambda) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("lambda must be positive");
  }
  check_transform_applies(transform, data);
  check_same_shape(data, coefficients);

  const Eigen::MatrixXd& t = transform.matrix();
  const Eigen::MatrixXd inv_transpose =
      t.partialPivLu().inverse().transpose();
  return 2.0 * (t * data - coefficients) * data.transpose() + 2.0 * lambda * t -
         lambda * inv_transpose;
}

Eigen::MatrixXd update_coefficients(const Transform& transform,
                                    const Eigen::MatrixXd& data) {
  check_transform_applies(transform, data);
  return transform.matrix() * data;
}

TransformUpdater::TransformUpdater(const Eigen::MatrixXd& data, double lambda)
    : data_(data), lambda_(lambda) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("lambda must be positive");
  }
  if (data.rows() == 0 || data.cols() == 0) {
    throw std::invalid_argument("data matrix is empty");
  }
  if (!data.allFinite()) {
    throw NumericError("data matrix has non-finite entries");
  }
  Eigen::MatrixXd gram = data * data.transpose();
  gram.diagonal().array() += lambda;
  llt_.compute(gram);
  if (llt_.info() != Eigen::Success) {
    throw NumericError("Cholesky factorization of X X^T + lambda I failed");
  }
}

Transform TransformUpdater::update(const Eigen::MatrixXd& coefficients) const {
  check_same_shape(data_, coefficients);
  if (!coefficients.allFinite()) {
    throw NumericError("coefficient matrix has non-finite entries");
  }

  // B = L^{-1} X Z^T by forward substitution.
  const Eigen::MatrixXd cross = data_ * coefficients.transpose();
  const Eigen::MatrixXd b = llt_.matrixL().solve(cross);

  Eigen::BDCSVD<Eigen::MatrixXd> svd(
      b, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::ArrayXd gains = svd.singularValues().array();
  gains = 0.5 * (gains + (gains.square() + 2.0 * lambda_).sqrt());

  const Eigen::MatrixXd rotated = svd.matrixV() * gains.matrix().asDiagonal() *
                                  svd.matrixU().transpose();
  // T = rotated L^{-1}, done as a triangular solve on the transpose.
  Eigen::MatrixXd t =
      llt_.matrixU().solve(rotated.transpose()).transpose();
  return Transform(std::move(t));
}

Transform update_transform(const Eigen::MatrixXd& data,
                           const Eigen::MatrixXd& coefficients, double lambda) {
  return TransformUpdater(data, lambda).update(coefficients);
}

}  // namespace ctl
