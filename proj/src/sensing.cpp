#include "ctl/sensing.hpp"

#include <cmath>
#include <random>
#include <string>

namespace ctl {

SensingMatrix bernoulli_matrix(Eigen::Index m, Eigen::Index n,
                               std::uint64_t seed) {
  if (m < 1 || n < 1) {
    throw std::invalid_argument("sensing matrix dimensions must be positive");
  }
  if (m > n) {
    throw std::invalid_argument("undersampling requires m <= n, got m = " +
                                std::to_string(m) + ", n = " + std::to_string(n));
  }
  SensingMatrix phi;
  phi.seed = seed;
  phi.scale = 1.0 / std::sqrt(static_cast<double>(m));
  phi.entries.resize(m, n);

  std::mt19937_64 rng(seed);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const std::uint64_t draw = rng();
      phi.entries(i, j) = (draw >> 63) ? phi.scale : -phi.scale;
    }
  }
  return phi;
}

Eigen::MatrixXd compress(const SensingMatrix& phi,
                         const Eigen::MatrixXd& signals) {
  if (phi.cols() != signals.rows()) {
    throw std::invalid_argument(
        "sensing matrix has " + std::to_string(phi.cols()) +
        " columns but signals have " + std::to_string(signals.rows()) + " rows");
  }
  return phi.entries * signals;
}

}  // namespace ctl
