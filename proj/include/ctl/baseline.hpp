#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "ctl/sensing.hpp"

namespace ctl {

// Orthonormal type-II DCT matrix; rows are the analysis atoms. Row 0 is the
// constant 1/sqrt(n); row k >= 1 has entries sqrt(2/n) cos(pi (2j+1) k / (2n)).
Eigen::MatrixXd dct_basis(Eigen::Index n);

// Proximal operator of tau |.|: sign(v) max(|v| - tau, 0).
inline double soft_threshold(double v, double tau) {
  const double mag = std::abs(v) - tau;
  return mag > 0.0 ? (v < 0.0 ? -mag : mag) : 0.0;
}
Eigen::VectorXd soft_threshold(const Eigen::VectorXd& v, double tau);

struct CsSolverConfig {
  double gamma = 1e-3;      // l1 weight
  int max_iters = 500;
  double rel_tol = 1e-8;
  bool acceleration = true; // momentum-accelerated shrinkage vs plain
};

struct CsSolveStats {
  int iterations = 0;
  double objective = 0.0;
  std::vector<double> objective_trace;  // one entry per iteration
};

// One proximal gradient step on 0.5 ||y - A alpha||^2 + gamma |alpha|_1:
// soft(alpha + step A^T (y - A alpha), step * gamma).
Eigen::VectorXd shrinkage_step(const Eigen::MatrixXd& system,
                               const Eigen::VectorXd& measurement,
                               const Eigen::VectorXd& alpha, double step,
                               double gamma);

// l1-regularized reconstruction over an orthonormal basis. Holds the solver
// system A = Phi S^T and its Lipschitz constant so batch evaluation does not
// redo the setup per sample.
class CsSolver {
 public:
  CsSolver(const SensingMatrix& phi, const Eigen::MatrixXd& basis,
           CsSolverConfig config);

  // x_hat = S^T alpha_hat with alpha_hat from proximal gradient iterations,
  // step 1/L, stopping on relative objective change < rel_tol or max_iters.
  Eigen::VectorXd reconstruct(const Eigen::VectorXd& measurement,
                              CsSolveStats* stats = nullptr) const;
  Eigen::VectorXd reconstruct(const Eigen::VectorXd& measurement, double gamma,
                              CsSolveStats* stats = nullptr) const;

  // Largest eigenvalue of A^T A (power iteration, 100 steps).
  double lipschitz() const noexcept { return lipschitz_; }
  const Eigen::MatrixXd& system() const noexcept { return system_; }
  const CsSolverConfig& config() const noexcept { return config_; }

  // ||A^T y||_inf; gammas at or above this drive alpha to zero.
  double correlation_ceiling(const Eigen::VectorXd& measurement) const;

 private:
  Eigen::MatrixXd basis_;
  Eigen::MatrixXd system_;  // A = Phi S^T
  CsSolverConfig config_;
  double lipschitz_ = 0.0;
};

// One-shot form.
Eigen::VectorXd cs_reconstruct(const SensingMatrix& phi,
                               const Eigen::MatrixXd& basis,
                               const Eigen::VectorXd& measurement,
                               const CsSolverConfig& config,
                               CsSolveStats* stats = nullptr);

// Grid multipliers tried by select_gamma_multiplier; the per-sample gamma is
// multiplier * ||A^T y||_inf.
inline constexpr double kGammaGrid[] = {1e-4, 1e-3, 1e-2, 1e-1};

// Picks the grid multiplier with the lowest mean NMSE over the validation
// windows (columns of `validation`, signal domain).
double select_gamma_multiplier(const SensingMatrix& phi,
                               const Eigen::MatrixXd& basis,
                               const Eigen::MatrixXd& validation,
                               const CsSolverConfig& config);

}  // namespace ctl
