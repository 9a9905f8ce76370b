#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ctl/errors.hpp"

namespace ctl {

struct SignalWindow {
  Eigen::VectorXd samples;
  std::string source_id;
  Eigen::Index offset = 0;  // sample index of the first entry in the source
};

// Fixed-length windows starting at multiples of `stride`; the trailing
// partial chunk is dropped. Returns an empty list when the stream is shorter
// than one window.
std::vector<SignalWindow> window_stream(std::span<const double> samples,
                                        Eigen::Index n, Eigen::Index stride,
                                        std::string_view source_id = "");

// Stacks windows as columns into an n x N matrix.
Eigen::MatrixXd windows_to_matrix(const std::vector<SignalWindow>& windows);

// ||estimate - reference||^2 / ||reference||^2
double nmse(const Eigen::VectorXd& estimate, const Eigen::VectorXd& reference);

// ||estimate - reference|| / sqrt(n)
double rmse(const Eigen::VectorXd& estimate, const Eigen::VectorXd& reference);

struct ErrorStats {
  double mean = 0.0;
  double std_dev = 0.0;  // sample standard deviation (divisor count - 1)
  double max = 0.0;
  double min = 0.0;
  std::size_t count = 0;
};

ErrorStats error_stats(std::span<const double> errors);

// Optional preprocessing, off by default in the standard protocol: centers
// each window (column) and scales it to unit norm. Windows that are constant
// after centering are left at zero.
Eigen::MatrixXd normalize_windows(const Eigen::MatrixXd& windows);

enum class SynthKind { Harmonic, PulseTrain };

SynthKind synth_kind_from_string(std::string_view name);
std::string to_string(SynthKind kind);

// Seeded synthetic signal families, one window per column, deterministic per
// (kind, seed). All draws come from one std::mt19937_64 walked column by
// column in this order:
//   harmonic:    K ~ U{3..6}; then per tone f ~ U{1..12} (integer cycles per
//                window) and phase ~ U[0, 2pi); window[j] = sum_k (1/f_k)
//                cos(2 pi f_k j / n + phase_k).
//   pulse-train: period P ~ U{max(4, n/8) .. max(8, n/4)}; first center
//                c0 ~ U{0..P-1}; then n/P + 2 per-bump jitters
//                ~ U{-max(1, P/16) .. +max(1, P/16)}; window[j] =
//                sum_b exp(-(j - c_b)^2 / (2 (P/10)^2)), c_b = c0 + b P +
//                jitter_b.
// When noise_std > 0, n further N(0,1) draws per window are scaled by
// noise_std and added; no draws are consumed when noise_std == 0.
Eigen::MatrixXd synth_signals(SynthKind kind, Eigen::Index count,
                              Eigen::Index n, std::uint64_t seed,
                              double noise_std);

// CSV ingestion contract: one window per row, plain decimal text, no header.
// Loaded matrices hold windows as columns. Errors name the offending line.
Eigen::MatrixXd load_windows_csv(const std::filesystem::path& path);

// Writes one window (column of `windows`) per row with enough digits for an
// exact round-trip.
void save_matrix_csv(const std::filesystem::path& path,
                     const Eigen::MatrixXd& windows);

}  // namespace ctl
