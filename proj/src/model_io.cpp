#include <array>
#include <bit>
#include <cstdint>
#include <fstream>
#include <string>

#include "ctl/coupled.hpp"
#include "ctl/errors.hpp"

namespace ctl {

namespace {

constexpr char kMagic[4] = {'C', 'T', 'L', '1'};

void write_u32le(std::ostream& out, std::uint32_t value) {
  const std::array<char, 4> bytes = {
      static_cast<char>(value & 0xff), static_cast<char>((value >> 8) & 0xff),
      static_cast<char>((value >> 16) & 0xff),
      static_cast<char>((value >> 24) & 0xff)};
  out.write(bytes.data(), bytes.size());
}

void write_f64le(std::ostream& out, double value) {
  const auto bits = std::bit_cast<std::uint64_t>(value);
  std::array<char, 8> bytes;
  for (int i = 0; i < 8; ++i) {
    bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  }
  out.write(bytes.data(), bytes.size());
}

std::uint32_t read_u32le(std::istream& in) {
  std::array<unsigned char, 4> bytes;
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  std::uint32_t value = 0;
  for (int i = 3; i >= 0; --i) {
    value = (value << 8) | bytes[i];
  }
  return value;
}

double read_f64le(std::istream& in) {
  std::array<unsigned char, 8> bytes;
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) {
    bits = (bits << 8) | bytes[i];
  }
  return std::bit_cast<double>(bits);
}

void write_row_major(std::ostream& out, const Eigen::MatrixXd& matrix) {
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      write_f64le(out, matrix(i, j));
    }
  }
}

Eigen::MatrixXd read_row_major(std::istream& in, Eigen::Index rows,
                               Eigen::Index cols) {
  Eigen::MatrixXd matrix(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      matrix(i, j) = read_f64le(in);
    }
  }
  return matrix;
}

}  // namespace

void save_model(const CoupledModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot open model file for writing: " + path.string());
  }
  out.write(kMagic, 4);
  write_u32le(out, static_cast<std::uint32_t>(model.signal_dim()));
  write_u32le(out, static_cast<std::uint32_t>(model.measurement_dim()));
  write_f64le(out, model.lambda);
  write_f64le(out, model.mu);
  write_row_major(out, model.measurement_transform.matrix());
  write_row_major(out, model.signal_transform.matrix());
  write_row_major(out, model.coupling);
  if (!out) {
    throw DataError("failed while writing model file: " + path.string());
  }
}

CoupledModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open model file: " + path.string());
  }
  char magic[4];
  in.read(magic, 4);
  if (!in || std::string_view(magic, 4) != std::string_view(kMagic, 4)) {
    throw DataError("not a CTL1 model file: " + path.string());
  }
  const std::uint32_t n = read_u32le(in);
  const std::uint32_t m = read_u32le(in);
  if (!in || n == 0 || m == 0) {
    throw DataError("model file has invalid dimensions: " + path.string());
  }
  const double lambda = read_f64le(in);
  const double mu = read_f64le(in);
  const Eigen::MatrixXd tm = read_row_major(in, m, m);
  const Eigen::MatrixXd ts = read_row_major(in, n, n);
  const Eigen::MatrixXd coupling = read_row_major(in, n, m);
  if (!in) {
    throw DataError("model file is truncated: " + path.string());
  }

  try {
    Transform measurement_transform(tm);
    Transform signal_transform(ts);
    Eigen::MatrixXd recon = reconstruction_operator(
        signal_transform, coupling, measurement_transform);
    return CoupledModel{std::move(measurement_transform),
                        std::move(signal_transform), coupling, lambda, mu,
                        std::move(recon)};
  } catch (const NumericError& err) {
    throw DataError("model file " + path.string() +
                    " holds an invalid transform: " + err.what());
  }
}

}  // namespace ctl
