#include "ctl/coupled.hpp"

#include <cmath>
#include <iostream>
#include <random>
#include <string>

namespace ctl {

namespace {

constexpr double kCouplingRidge = 1e-10;

void check_cols_match(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                      const char* what) {
  if (a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(what) + ": column counts differ (" +
                                std::to_string(a.cols()) + " vs " +
                                std::to_string(b.cols()) + ")");
  }
}

Transform random_orthogonal(Eigen::Index k, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd g(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      g(i, j) = normal(rng);
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  return Transform(std::move(q));
}

}  // namespace

CoupledObjective coupled_objective(
    const Transform& measurement_transform, const Transform& signal_transform,
    const Eigen::MatrixXd& measurement_coeffs,
    const Eigen::MatrixXd& signal_coeffs, const Eigen::MatrixXd& coupling,
    const Eigen::MatrixXd& signals, const Eigen::MatrixXd& measurements,
    double lambda, double mu) {
  if (!(lambda > 0.0) || mu < 0.0) {
    throw std::invalid_argument("need lambda > 0 and mu >= 0");
  }
  if (measurement_transform.dim() != measurements.rows() ||
      signal_transform.dim() != signals.rows() ||
      measurement_coeffs.rows() != measurements.rows() ||
      signal_coeffs.rows() != signals.rows() ||
      coupling.rows() != signals.rows() ||
      coupling.cols() != measurements.rows()) {
    throw std::invalid_argument("coupled objective: dimension mismatch");
  }
  check_cols_match(signals, measurements, "signals vs measurements");
  check_cols_match(measurement_coeffs, measurements, "measurement coefficients");
  check_cols_match(signal_coeffs, signals, "signal coefficients");

  CoupledObjective value;
  value.fidelity_measurement =
      (measurement_transform.matrix() * measurements - measurement_coeffs)
          .squaredNorm();
  value.fidelity_signal =
      (signal_transform.matrix() * signals - signal_coeffs).squaredNorm();
  value.regularizer =
      lambda * (measurement_transform.matrix().squaredNorm() +
                signal_transform.matrix().squaredNorm() -
                measurement_transform.log_abs_det() -
                signal_transform.log_abs_det());
  value.coupling =
      mu * (signal_coeffs - coupling * measurement_coeffs).squaredNorm();
  value.total = value.fidelity_measurement + value.fidelity_signal +
                value.regularizer + value.coupling;
  return value;
}

Eigen::MatrixXd update_measurement_coefficients(
    const Transform& measurement_transform, const Eigen::MatrixXd& measurements,
    const Eigen::MatrixXd& signal_coeffs, const Eigen::MatrixXd& coupling,
    double mu) {
  if (mu < 0.0) {
    throw std::invalid_argument("mu must be nonnegative");
  }
  if (measurement_transform.dim() != measurements.rows() ||
      coupling.cols() != measurements.rows() ||
      coupling.rows() != signal_coeffs.rows()) {
    throw std::invalid_argument(
        "measurement coefficient update: dimension mismatch");
  }
  check_cols_match(signal_coeffs, measurements, "signal coefficients");

  const Eigen::MatrixXd rhs = measurement_transform.matrix() * measurements +
                              mu * coupling.transpose() * signal_coeffs;
  if (mu == 0.0) {
    return rhs;
  }
  Eigen::MatrixXd normal = mu * coupling.transpose() * coupling;
  normal.diagonal().array() += 1.0;
  return Eigen::LLT<Eigen::MatrixXd>(normal).solve(rhs);
}

Eigen::MatrixXd update_signal_coefficients(
    const Transform& signal_transform, const Eigen::MatrixXd& signals,
    const Eigen::MatrixXd& measurement_coeffs, const Eigen::MatrixXd& coupling,
    double mu) {
  if (mu < 0.0) {
    throw std::invalid_argument("mu must be nonnegative");
  }
  if (signal_transform.dim() != signals.rows() ||
      coupling.rows() != signals.rows() ||
      coupling.cols() != measurement_coeffs.rows()) {
    throw std::invalid_argument("signal coefficient update: dimension mismatch");
  }
  check_cols_match(measurement_coeffs, signals, "measurement coefficients");

  return (signal_transform.matrix() * signals +
          mu * coupling * measurement_coeffs) /
         (1.0 + mu);
}

Eigen::MatrixXd fit_coupling(const Eigen::MatrixXd& signal_coeffs,
                             const Eigen::MatrixXd& measurement_coeffs) {
  check_cols_match(signal_coeffs, measurement_coeffs, "coupling fit");

  const Eigen::MatrixXd gram = measurement_coeffs * measurement_coeffs.transpose();
  const Eigen::MatrixXd cross = measurement_coeffs * signal_coeffs.transpose();

  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  if (ldlt.info() == Eigen::Success && ldlt.isPositive() &&
      ldlt.vectorD().minCoeff() >
          kSingularTol * std::max(1.0, ldlt.vectorD().maxCoeff())) {
    return ldlt.solve(cross).transpose();
  }
  // Rank-deficient coefficients (typical of degenerate early iterations):
  // ridge-regularized solve instead of aborting.
  Eigen::MatrixXd ridged = gram;
  ridged.diagonal().array() += kCouplingRidge;
  return Eigen::LDLT<Eigen::MatrixXd>(ridged).solve(cross).transpose();
}

Eigen::MatrixXd reconstruction_operator(const Transform& signal_transform,
                                        const Eigen::MatrixXd& coupling,
                                        const Transform& measurement_transform) {
  if (coupling.rows() != signal_transform.dim() ||
      coupling.cols() != measurement_transform.dim()) {
    throw std::invalid_argument("reconstruction operator: dimension mismatch");
  }
  return signal_transform.matrix().partialPivLu().solve(
      coupling * measurement_transform.matrix());
}

CoupledTrainer::CoupledTrainer(const Eigen::MatrixXd& signals,
                               const Eigen::MatrixXd& measurements,
                               TrainConfig config)
    : signals_(signals),
      measurements_(measurements),
      config_(config),
      measurement_updater_(measurements, config.lambda),
      signal_updater_(signals, config.lambda),
      measurement_transform_(Transform::identity(measurements.rows())),
      signal_transform_(Transform::identity(signals.rows())) {
  if (signals.cols() != measurements.cols()) {
    throw std::invalid_argument(
        "training signals and measurements must pair column for column");
  }
  if (!(config.lambda > 0.0) || !(config.mu > 0.0)) {
    throw std::invalid_argument("need lambda > 0 and mu > 0");
  }
  if (config.max_iters < 1 || !(config.rel_tol > 0.0)) {
    throw std::invalid_argument("need max_iters >= 1 and rel_tol > 0");
  }
  if (!signals.allFinite() || !measurements.allFinite()) {
    throw NumericError("training data has non-finite entries");
  }
  const Eigen::Index n = signals.rows();
  const Eigen::Index m = measurements.rows();
  if (signals.cols() < std::max(n, m)) {
    std::cerr << "ctl: warning: only " << signals.cols()
              << " training windows for dimensions n = " << n << ", m = " << m
              << "; expect a rank-deficient fit\n";
  }

  if (config.init == TrainConfig::Init::RandomOrthogonal) {
    std::mt19937_64 rng(config.seed);
    measurement_transform_ = random_orthogonal(m, rng);
    signal_transform_ = random_orthogonal(n, rng);
  }
  measurement_coeffs_ = measurement_transform_.matrix() * measurements_;
  signal_coeffs_ = signal_transform_.matrix() * signals_;
  coupling_ = fit_coupling(signal_coeffs_, measurement_coeffs_);
}

void CoupledTrainer::update_measurement_coefficients_step() {
  measurement_coeffs_ = ctl::update_measurement_coefficients(
      measurement_transform_, measurements_, signal_coeffs_, coupling_,
      config_.mu);
}

void CoupledTrainer::update_signal_coefficients_step() {
  signal_coeffs_ = ctl::update_signal_coefficients(
      signal_transform_, signals_, measurement_coeffs_, coupling_, config_.mu);
}

void CoupledTrainer::update_measurement_transform_step() {
  measurement_transform_ = measurement_updater_.update(measurement_coeffs_);
}

void CoupledTrainer::update_signal_transform_step() {
  signal_transform_ = signal_updater_.update(signal_coeffs_);
}

void CoupledTrainer::update_coupling_step() {
  coupling_ = fit_coupling(signal_coeffs_, measurement_coeffs_);
}

void CoupledTrainer::sweep() {
  update_measurement_coefficients_step();
  update_signal_coefficients_step();
  update_measurement_transform_step();
  update_signal_transform_step();
  update_coupling_step();
}

CoupledObjective CoupledTrainer::objective() const {
  return coupled_objective(measurement_transform_, signal_transform_,
                           measurement_coeffs_, signal_coeffs_, coupling_,
                           signals_, measurements_, config_.lambda, config_.mu);
}

TrainTrace CoupledTrainer::run() {
  TrainTrace trace;
  trace.objectives.push_back(objective());
  for (int iter = 1; iter <= config_.max_iters; ++iter) {
    sweep();
    trace.objectives.push_back(objective());
    trace.iterations_run = iter;
    const double previous = trace.objectives[iter - 1].total;
    const double current = trace.objectives[iter].total;
    const double rel_change =
        std::abs(current - previous) / std::max(1.0, std::abs(previous));
    if (rel_change < config_.rel_tol) {
      trace.converged = true;
      break;
    }
  }
  return trace;
}

CoupledModel CoupledTrainer::finalize() const {
  return CoupledModel{
      measurement_transform_,
      signal_transform_,
      coupling_,
      config_.lambda,
      config_.mu,
      reconstruction_operator(signal_transform_, coupling_,
                              measurement_transform_)};
}

std::pair<CoupledModel, TrainTrace> train(const Eigen::MatrixXd& signals,
                                          const Eigen::MatrixXd& measurements,
                                          const TrainConfig& config) {
  CoupledTrainer trainer(signals, measurements, config);
  TrainTrace trace = trainer.run();
  return {trainer.finalize(), std::move(trace)};
}

Eigen::MatrixXd reconstruct(const CoupledModel& model,
                            const Eigen::MatrixXd& measurements) {
  if (measurements.rows() != model.measurement_dim()) {
    throw std::invalid_argument(
        "measurements have " + std::to_string(measurements.rows()) +
        " rows, model expects " + std::to_string(model.measurement_dim()));
  }
  return model.recon_op * measurements;
}

Eigen::VectorXd reconstruct(const CoupledModel& model,
                            const Eigen::VectorXd& measurement) {
  if (measurement.size() != model.measurement_dim()) {
    throw std::invalid_argument(
        "measurement has " + std::to_string(measurement.size()) +
        " entries, model expects " + std::to_string(model.measurement_dim()));
  }
  return model.recon_op * measurement;
}

}  // namespace ctl
