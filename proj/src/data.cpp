#include "ctl/data.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace ctl {

std::vector<SignalWindow> window_stream(std::span<const double> samples,
                                        Eigen::Index n, Eigen::Index stride,
                                        std::string_view source_id) {
  if (n < 1 || stride < 1) {
    throw std::invalid_argument("window length and stride must be >= 1");
  }
  std::vector<SignalWindow> windows;
  const auto len = static_cast<Eigen::Index>(samples.size());
  if (len < n) {
    return windows;
  }
  windows.reserve(static_cast<std::size_t>((len - n) / stride + 1));
  for (Eigen::Index start = 0; start + n <= len; start += stride) {
    SignalWindow window;
    window.samples =
        Eigen::Map<const Eigen::VectorXd>(samples.data() + start, n);
    window.source_id = source_id;
    window.offset = start;
    windows.push_back(std::move(window));
  }
  return windows;
}

Eigen::MatrixXd windows_to_matrix(const std::vector<SignalWindow>& windows) {
  if (windows.empty()) {
    return Eigen::MatrixXd(0, 0);
  }
  const Eigen::Index n = windows.front().samples.size();
  Eigen::MatrixXd matrix(n, static_cast<Eigen::Index>(windows.size()));
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (windows[i].samples.size() != n) {
      throw std::invalid_argument("windows have mixed lengths");
    }
    matrix.col(static_cast<Eigen::Index>(i)) = windows[i].samples;
  }
  return matrix;
}

double nmse(const Eigen::VectorXd& estimate, const Eigen::VectorXd& reference) {
  if (estimate.size() != reference.size()) {
    throw std::invalid_argument("nmse: vector sizes differ");
  }
  const double denom = reference.squaredNorm();
  if (denom == 0.0) {
    throw std::invalid_argument("nmse: reference vector is zero");
  }
  return (estimate - reference).squaredNorm() / denom;
}

double rmse(const Eigen::VectorXd& estimate, const Eigen::VectorXd& reference) {
  if (estimate.size() != reference.size()) {
    throw std::invalid_argument("rmse: vector sizes differ");
  }
  if (reference.size() == 0) {
    throw std::invalid_argument("rmse: empty vectors");
  }
  return std::sqrt((estimate - reference).squaredNorm() /
                   static_cast<double>(reference.size()));
}

ErrorStats error_stats(std::span<const double> errors) {
  if (errors.empty()) {
    throw std::invalid_argument("error_stats: empty list");
  }
  ErrorStats stats;
  stats.count = errors.size();
  stats.min = errors[0];
  stats.max = errors[0];
  double sum = 0.0;
  for (double e : errors) {
    sum += e;
    stats.min = std::min(stats.min, e);
    stats.max = std::max(stats.max, e);
  }
  stats.mean = sum / static_cast<double>(errors.size());
  if (errors.size() > 1) {
    double ss = 0.0;
    for (double e : errors) {
      const double d = e - stats.mean;
      ss += d * d;
    }
    stats.std_dev = std::sqrt(ss / static_cast<double>(errors.size() - 1));
  }
  return stats;
}

Eigen::MatrixXd normalize_windows(const Eigen::MatrixXd& windows) {
  Eigen::MatrixXd normalized = windows;
  for (Eigen::Index c = 0; c < normalized.cols(); ++c) {
    auto column = normalized.col(c);
    column.array() -= column.mean();
    const double norm = column.norm();
    if (norm > 0.0) {
      column /= norm;
    }
  }
  return normalized;
}

SynthKind synth_kind_from_string(std::string_view name) {
  if (name == "harmonic") {
    return SynthKind::Harmonic;
  }
  if (name == "pulse-train") {
    return SynthKind::PulseTrain;
  }
  throw std::invalid_argument("unknown signal kind: " + std::string(name) +
                              " (expected harmonic or pulse-train)");
}

std::string to_string(SynthKind kind) {
  return kind == SynthKind::Harmonic ? "harmonic" : "pulse-train";
}

Eigen::MatrixXd synth_signals(SynthKind kind, Eigen::Index count,
                              Eigen::Index n, std::uint64_t seed,
                              double noise_std) {
  if (count < 1 || n < 1) {
    throw std::invalid_argument("synth_signals needs count >= 1 and n >= 1");
  }
  if (noise_std < 0.0) {
    throw std::invalid_argument("noise_std must be nonnegative");
  }
  Eigen::MatrixXd windows(n, count);
  std::mt19937_64 rng(seed);

  for (Eigen::Index c = 0; c < count; ++c) {
    auto column = windows.col(c);
    column.setZero();
    if (kind == SynthKind::Harmonic) {
      std::uniform_int_distribution<int> tone_count(3, 6);
      std::uniform_int_distribution<int> frequency(1, 12);
      std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
      const int tones = tone_count(rng);
      for (int k = 0; k < tones; ++k) {
        const double f = frequency(rng);
        const double ph = phase(rng);
        for (Eigen::Index j = 0; j < n; ++j) {
          column(j) += (1.0 / f) *
                       std::cos(2.0 * std::numbers::pi * f * j / double(n) + ph);
        }
      }
    } else {
      const auto lo = std::max<Eigen::Index>(4, n / 8);
      const auto hi = std::max<Eigen::Index>(8, n / 4);
      std::uniform_int_distribution<Eigen::Index> period_dist(lo, hi);
      const Eigen::Index period = period_dist(rng);
      std::uniform_int_distribution<Eigen::Index> center_dist(0, period - 1);
      const Eigen::Index first_center = center_dist(rng);
      const Eigen::Index jitter_span = std::max<Eigen::Index>(1, period / 16);
      std::uniform_int_distribution<Eigen::Index> jitter_dist(-jitter_span,
                                                              jitter_span);
      const Eigen::Index bumps = n / period + 2;
      const double width = static_cast<double>(period) / 10.0;
      for (Eigen::Index b = 0; b < bumps; ++b) {
        const double center =
            static_cast<double>(first_center + b * period + jitter_dist(rng));
        for (Eigen::Index j = 0; j < n; ++j) {
          const double d = (static_cast<double>(j) - center) / width;
          column(j) += std::exp(-0.5 * d * d);
        }
      }
    }
    if (noise_std > 0.0) {
      std::normal_distribution<double> noise(0.0, 1.0);
      for (Eigen::Index j = 0; j < n; ++j) {
        column(j) += noise_std * noise(rng);
      }
    }
  }
  return windows;
}

Eigen::MatrixXd load_windows_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open CSV file: " + path.string());
  }

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    // Tolerate a trailing carriage return and skip blank lines.
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    std::vector<double> row;
    const char* cursor = line.c_str();
    const char* end = cursor + line.size();
    while (cursor < end) {
      char* next = nullptr;
      const double value = std::strtod(cursor, &next);
      if (next == cursor) {
        throw DataError(path.string() + ": line " +
                        std::to_string(line_number) + ": not a number at '" +
                        std::string(cursor).substr(0, 16) + "'");
      }
      if (!std::isfinite(value)) {
        throw DataError(path.string() + ": line " +
                        std::to_string(line_number) + ": non-finite value");
      }
      row.push_back(value);
      cursor = next;
      while (cursor < end && std::isspace(static_cast<unsigned char>(*cursor))) {
        ++cursor;
      }
      if (cursor < end) {
        if (*cursor != ',') {
          throw DataError(path.string() + ": line " +
                          std::to_string(line_number) +
                          ": expected ',' at '" +
                          std::string(cursor).substr(0, 16) + "'");
        }
        ++cursor;
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw DataError(path.string() + ": line " + std::to_string(line_number) +
                      ": has " + std::to_string(row.size()) +
                      " values, expected " +
                      std::to_string(rows.front().size()));
    }
    if (row.empty()) {
      throw DataError(path.string() + ": line " + std::to_string(line_number) +
                      ": empty row");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw DataError(path.string() + ": no data rows");
  }

  const auto n = static_cast<Eigen::Index>(rows.front().size());
  Eigen::MatrixXd windows(n, static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (Eigen::Index j = 0; j < n; ++j) {
      windows(j, static_cast<Eigen::Index>(r)) = rows[r][static_cast<std::size_t>(j)];
    }
  }
  return windows;
}

void save_matrix_csv(const std::filesystem::path& path,
                     const Eigen::MatrixXd& windows) {
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot open CSV file for writing: " + path.string());
  }
  char buffer[40];
  std::string line;
  for (Eigen::Index c = 0; c < windows.cols(); ++c) {
    line.clear();
    for (Eigen::Index j = 0; j < windows.rows(); ++j) {
      std::snprintf(buffer, sizeof(buffer), "%.17g", windows(j, c));
      if (j > 0) {
        line += ',';
      }
      line += buffer;
    }
    line += '\n';
    out << line;
  }
  if (!out) {
    throw DataError("failed while writing CSV file: " + path.string());
  }
}

}  // namespace ctl
