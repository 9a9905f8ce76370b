#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "ctl/transform.hpp"

namespace ctl {

struct TrainConfig {
  double lambda = 0.1;
  double mu = 1.0;
  int max_iters = 200;
  double rel_tol = 1e-6;
  std::uint64_t seed = 0;
  enum class Init { Identity, RandomOrthogonal };
  Init init = Init::Identity;
};

// One evaluation of the coupled objective, term by term.
struct CoupledObjective {
  double fidelity_measurement = 0.0;  // ||T_M Y - Z_M||_F^2
  double fidelity_signal = 0.0;       // ||T_S X - Z_S||_F^2
  double regularizer = 0.0;           // lambda (||T_M||^2 + ||T_S||^2 - log|det T_M| - log|det T_S|)
  double coupling = 0.0;              // mu ||Z_S - C Z_M||_F^2
  double total = 0.0;
};

struct TrainTrace {
  // objectives[0] is the value right after initialization; one entry per
  // completed sweep follows.
  std::vector<CoupledObjective> objectives;
  int iterations_run = 0;
  bool converged = false;
};

// Trained bundle. The reconstruction operator collapses the inference chain
// (coefficients, coupling map, signal-domain solve) into one n x m matrix, so
// applying the model is a single matrix-vector product.
struct CoupledModel {
  Transform measurement_transform;  // m x m
  Transform signal_transform;       // n x n
  Eigen::MatrixXd coupling;         // n x m
  double lambda = 0.0;
  double mu = 0.0;
  Eigen::MatrixXd recon_op;         // n x m, = T_S^{-1} C T_M

  Eigen::Index measurement_dim() const noexcept { return measurement_transform.dim(); }
  Eigen::Index signal_dim() const noexcept { return signal_transform.dim(); }
};

CoupledObjective coupled_objective(
    const Transform& measurement_transform, const Transform& signal_transform,
    const Eigen::MatrixXd& measurement_coeffs,
    const Eigen::MatrixXd& signal_coeffs, const Eigen::MatrixXd& coupling,
    const Eigen::MatrixXd& signals, const Eigen::MatrixXd& measurements,
    double lambda, double mu);

// Minimizer of ||T_M Y - Z_M||^2 + mu ||Z_S - C Z_M||^2 over Z_M: solves the
// normal equations (I + mu C^T C) Z_M = T_M Y + mu C^T Z_S.
Eigen::MatrixXd update_measurement_coefficients(
    const Transform& measurement_transform, const Eigen::MatrixXd& measurements,
    const Eigen::MatrixXd& signal_coeffs, const Eigen::MatrixXd& coupling,
    double mu);

// Minimizer of ||T_S X - Z_S||^2 + mu ||Z_S - C Z_M||^2 over Z_S:
// Z_S = (T_S X + mu C Z_M) / (1 + mu).
Eigen::MatrixXd update_signal_coefficients(
    const Transform& signal_transform, const Eigen::MatrixXd& signals,
    const Eigen::MatrixXd& measurement_coeffs, const Eigen::MatrixXd& coupling,
    double mu);

// Least-squares coupling map C = Z_S Z_M^T (Z_M Z_M^T)^{-1}. Rank-deficient
// Z_M gets a 1e-10 ridge on the Gram matrix instead of failing.
Eigen::MatrixXd fit_coupling(const Eigen::MatrixXd& signal_coeffs,
                             const Eigen::MatrixXd& measurement_coeffs);

// T_S^{-1} C T_M via an LU solve (no explicit inverse).
Eigen::MatrixXd reconstruction_operator(const Transform& signal_transform,
                                        const Eigen::MatrixXd& coupling,
                                        const Transform& measurement_transform);

// Alternating minimization over (Z_M, Z_S, T_M, T_S, C), one exact block
// solve per sub-step. Exposes the sub-steps individually so monotonicity can
// be observed between them; run() performs the full loop.
class CoupledTrainer {
 public:
  // Keeps references to both data matrices for its lifetime.
  CoupledTrainer(const Eigen::MatrixXd& signals,
                 const Eigen::MatrixXd& measurements, TrainConfig config);

  void update_measurement_coefficients_step();
  void update_signal_coefficients_step();
  void update_measurement_transform_step();
  void update_signal_transform_step();
  void update_coupling_step();

  // All five sub-steps, in the fixed order above.
  void sweep();

  TrainTrace run();

  CoupledObjective objective() const;
  CoupledModel finalize() const;

  const Transform& measurement_transform() const noexcept { return measurement_transform_; }
  const Transform& signal_transform() const noexcept { return signal_transform_; }
  const Eigen::MatrixXd& measurement_coefficients() const noexcept { return measurement_coeffs_; }
  const Eigen::MatrixXd& signal_coefficients() const noexcept { return signal_coeffs_; }
  const Eigen::MatrixXd& coupling() const noexcept { return coupling_; }

 private:
  const Eigen::MatrixXd& signals_;
  const Eigen::MatrixXd& measurements_;
  TrainConfig config_;
  TransformUpdater measurement_updater_;
  TransformUpdater signal_updater_;
  Transform measurement_transform_;
  Transform signal_transform_;
  Eigen::MatrixXd measurement_coeffs_;
  Eigen::MatrixXd signal_coeffs_;
  Eigen::MatrixXd coupling_;
};

// Trains on signals X (n x N) and their compressed measurements Y (m x N).
std::pair<CoupledModel, TrainTrace> train(const Eigen::MatrixXd& signals,
                                          const Eigen::MatrixXd& measurements,
                                          const TrainConfig& config);

// Inversion: one recon_op product per column.
Eigen::MatrixXd reconstruct(const CoupledModel& model,
                            const Eigen::MatrixXd& measurements);
Eigen::VectorXd reconstruct(const CoupledModel& model,
                            const Eigen::VectorXd& measurement);

// Binary model file, magic "CTL1", little-endian: u32 n, u32 m, f64 lambda,
// f64 mu, then T_M (m*m), T_S (n*n), C (n*m) as row-major f64. recon_op is
// recomputed on load.
void save_model(const CoupledModel& model, const std::filesystem::path& path);
CoupledModel load_model(const std::filesystem::path& path);

}  // namespace ctl
