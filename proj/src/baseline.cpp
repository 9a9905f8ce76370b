#include "ctl/baseline.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ctl/errors.hpp"

namespace ctl {

namespace {

// Largest eigenvalue of A^T A by 100 power-iteration steps, given A. The tiny
// inflation keeps 1/L a valid descent step even though the iteration
// approaches the eigenvalue from below.
double lipschitz_constant(const Eigen::MatrixXd& system) {
  const Eigen::Index n = system.cols();
  Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(double(n)));
  for (int step = 0; step < 100; ++step) {
    Eigen::VectorXd w = system.transpose() * (system * v);
    const double norm = w.norm();
    if (norm == 0.0) {
      return 0.0;
    }
    v = w / norm;
  }
  return (system * v).squaredNorm() * (1.0 + 1e-9);
}

double lasso_objective(const Eigen::MatrixXd& system, const Eigen::VectorXd& y,
                       const Eigen::VectorXd& alpha, double gamma) {
  return 0.5 * (y - system * alpha).squaredNorm() +
         gamma * alpha.template lpNorm<1>();
}

}  // namespace

Eigen::MatrixXd dct_basis(Eigen::Index n) {
  if (n < 1) {
    throw std::invalid_argument("dct_basis needs n >= 1");
  }
  Eigen::MatrixXd basis(n, n);
  const double dn = static_cast<double>(n);
  basis.row(0).setConstant(1.0 / std::sqrt(dn));
  for (Eigen::Index k = 1; k < n; ++k) {
    for (Eigen::Index j = 0; j < n; ++j) {
      basis(k, j) = std::sqrt(2.0 / dn) *
                    std::cos(std::numbers::pi * (2.0 * j + 1.0) * k / (2.0 * dn));
    }
  }
  return basis;
}

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& v, double tau) {
  if (tau < 0.0) {
    throw std::invalid_argument("soft_threshold needs tau >= 0");
  }
  return v.unaryExpr([tau](double x) { return soft_threshold(x, tau); });
}

Eigen::VectorXd shrinkage_step(const Eigen::MatrixXd& system,
                               const Eigen::VectorXd& measurement,
                               const Eigen::VectorXd& alpha, double step,
                               double gamma) {
  return soft_threshold(
      alpha + step * (system.transpose() * (measurement - system * alpha)),
      step * gamma);
}

CsSolver::CsSolver(const SensingMatrix& phi, const Eigen::MatrixXd& basis,
                   CsSolverConfig config)
    : basis_(basis), config_(config) {
  if (basis.rows() != basis.cols()) {
    throw std::invalid_argument("sparsifying basis must be square");
  }
  if (phi.cols() != basis.rows()) {
    throw std::invalid_argument(
        "sensing matrix has " + std::to_string(phi.cols()) +
        " columns, basis is " + std::to_string(basis.rows()) + "x" +
        std::to_string(basis.cols()));
  }
  if (!(config.gamma > 0.0) || config.max_iters < 1 ||
      !(config.rel_tol > 0.0)) {
    throw std::invalid_argument("invalid solver configuration");
  }
  if (!phi.entries.allFinite() || !basis.allFinite()) {
    throw NumericError("solver system has non-finite entries");
  }
  system_ = phi.entries * basis.transpose();
  lipschitz_ = lipschitz_constant(system_);
}

Eigen::VectorXd CsSolver::reconstruct(const Eigen::VectorXd& measurement,
                                      CsSolveStats* stats) const {
  return reconstruct(measurement, config_.gamma, stats);
}

Eigen::VectorXd CsSolver::reconstruct(const Eigen::VectorXd& measurement,
                                      double gamma,
                                      CsSolveStats* stats) const {
  if (measurement.size() != system_.rows()) {
    throw std::invalid_argument(
        "measurement has " + std::to_string(measurement.size()) +
        " entries, system expects " + std::to_string(system_.rows()));
  }
  if (!measurement.allFinite()) {
    throw NumericError("measurement has non-finite entries");
  }
  if (!(gamma > 0.0)) {
    throw std::invalid_argument("gamma must be positive");
  }

  const Eigen::Index n = system_.cols();
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  if (lipschitz_ == 0.0) {
    // A == 0: the l1 term decides, alpha = 0.
    if (stats) {
      stats->iterations = 0;
      stats->objective = lasso_objective(system_, measurement, alpha, gamma);
    }
    return basis_.transpose() * alpha;
  }
  const double step = 1.0 / lipschitz_;

  Eigen::VectorXd momentum = alpha;  // FISTA extrapolation point
  double t = 1.0;
  double previous = lasso_objective(system_, measurement, alpha, gamma);
  if (stats) {
    stats->objective_trace.clear();
  }

  int iter = 0;
  for (; iter < config_.max_iters; ++iter) {
    Eigen::VectorXd next;
    if (config_.acceleration) {
      next = shrinkage_step(system_, measurement, momentum, step, gamma);
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      momentum = next + ((t - 1.0) / t_next) * (next - alpha);
      t = t_next;
    } else {
      next = shrinkage_step(system_, measurement, alpha, step, gamma);
    }
    alpha = std::move(next);

    const double current = lasso_objective(system_, measurement, alpha, gamma);
    if (stats) {
      stats->objective_trace.push_back(current);
    }
    const double rel_change =
        std::abs(current - previous) / std::max(1.0, std::abs(previous));
    previous = current;
    if (rel_change < config_.rel_tol) {
      ++iter;
      break;
    }
  }

  if (stats) {
    stats->iterations = iter;
    stats->objective = previous;
  }
  return basis_.transpose() * alpha;
}

double CsSolver::correlation_ceiling(const Eigen::VectorXd& measurement) const {
  if (measurement.size() != system_.rows()) {
    throw std::invalid_argument("correlation_ceiling: dimension mismatch");
  }
  return (system_.transpose() * measurement).template lpNorm<Eigen::Infinity>();
}

Eigen::VectorXd cs_reconstruct(const SensingMatrix& phi,
                               const Eigen::MatrixXd& basis,
                               const Eigen::VectorXd& measurement,
                               const CsSolverConfig& config,
                               CsSolveStats* stats) {
  return CsSolver(phi, basis, config).reconstruct(measurement, stats);
}

double select_gamma_multiplier(const SensingMatrix& phi,
                               const Eigen::MatrixXd& basis,
                               const Eigen::MatrixXd& validation,
                               const CsSolverConfig& config) {
  if (validation.cols() < 1) {
    throw std::invalid_argument("need at least one validation window");
  }
  CsSolver solver(phi, basis, config);

  double best_multiplier = kGammaGrid[0];
  double best_score = std::numeric_limits<double>::infinity();
  for (double multiplier : kGammaGrid) {
    double score = 0.0;
    for (Eigen::Index c = 0; c < validation.cols(); ++c) {
      const Eigen::VectorXd x = validation.col(c);
      const Eigen::VectorXd y = phi.entries * x;
      const double ceiling = solver.correlation_ceiling(y);
      if (ceiling == 0.0) {
        continue;  // zero measurement contributes nothing to the score
      }
      const Eigen::VectorXd x_hat = solver.reconstruct(y, multiplier * ceiling);
      const double denom = x.squaredNorm();
      score += denom > 0.0 ? (x_hat - x).squaredNorm() / denom
                           : x_hat.squaredNorm();
    }
    if (score < best_score) {
      best_score = score;
      best_multiplier = multiplier;
    }
  }
  return best_multiplier;
}

}  // namespace ctl
