#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "ctl/errors.hpp"

namespace ctl {

// Random projection used for compressive acquisition. Entries of matrices
// produced by bernoulli_matrix are +/- scale with scale = 1/sqrt(m).
struct SensingMatrix {
  Eigen::MatrixXd entries;  // m x n
  std::uint64_t seed = 0;
  double scale = 1.0;

  Eigen::Index rows() const noexcept { return entries.rows(); }
  Eigen::Index cols() const noexcept { return entries.cols(); }
};

// Seeded symmetric Bernoulli (Rademacher) matrix, m x n, entries +/- 1/sqrt(m).
//
// Reproducibility contract: entries are generated from std::mt19937_64 seeded
// with `seed`, one 64-bit draw per entry in row-major order; the entry is
// +scale when the draw's most significant bit is set, -scale otherwise. This
// mapping uses only the raw engine output, so identical (m, n, seed) give
// bit-identical matrices on every platform.
SensingMatrix bernoulli_matrix(Eigen::Index m, Eigen::Index n,
                               std::uint64_t seed);

// Y = Phi X, one compressed column per signal column.
Eigen::MatrixXd compress(const SensingMatrix& phi, const Eigen::MatrixXd& signals);

}  // namespace ctl
