#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ctl/baseline.hpp"
#include "ctl/coupled.hpp"
#include "ctl/data.hpp"

// Command implementations behind the ctl binary. The binary only parses
// arguments and maps exceptions to exit codes; tests drive these directly.
namespace ctl::cli {

struct SynthSpec {
  std::string kind = "harmonic";
  Eigen::Index count = 100;
  Eigen::Index n = 512;
  std::uint64_t seed = 0;
  double noise_std = 0.0;
  std::filesystem::path out;
};

void run_synth(const SynthSpec& spec, std::ostream& out);

struct TrainSpec {
  std::filesystem::path train_csv;
  double ratio = 0.25;
  std::uint64_t seed = 0;  // sensing matrix seed, shared with evaluation
  bool normalize = false;  // per-window zero-mean/unit-norm preprocessing
  TrainConfig config;
  std::filesystem::path model_path;
};

struct TrainResult {
  Eigen::Index n = 0;
  Eigen::Index m = 0;
  TrainTrace trace;
  double train_seconds = 0.0;
};

// Writes the model file, `<model>.manifest`, and `<model>.trace.csv`.
TrainResult run_train(const TrainSpec& spec, std::ostream& out);

struct EvaluateSpec {
  std::filesystem::path model_path;  // needed when method includes "coupled"
  std::filesystem::path test_csv;
  std::filesystem::path train_csv;   // validation slice for the gamma grid
  std::string method = "both";       // coupled | cs-baseline | both
  double gamma = 0.0;                // > 0 pins the l1 weight; 0 = grid search
  std::optional<double> ratio;       // override the model manifest
  std::optional<std::uint64_t> seed; // override the model manifest
  std::optional<bool> normalize;     // manifest wins when present
  CsSolverConfig cs;
  std::filesystem::path out_prefix;  // optional: <prefix>.csv, .errors.csv, .manifest
};

struct MethodErrors {
  std::string method;
  std::vector<double> nmse_values;  // one per test window
  std::vector<double> rmse_values;
  ErrorStats nmse_stats;
  ErrorStats rmse_stats;
};

struct EvaluateResult {
  Eigen::Index n = 0;
  Eigen::Index m = 0;
  double ratio = 0.0;
  std::uint64_t seed = 0;
  double gamma_multiplier = 0.0;  // 0 when gamma was given explicitly
  double mean_cs_iterations = 0.0;
  std::vector<MethodErrors> methods;
};

EvaluateResult run_evaluate(const EvaluateSpec& spec, std::ostream& out);

struct BenchmarkSpec {
  std::filesystem::path model_path;
  std::filesystem::path test_csv;
  std::filesystem::path train_csv;
  std::string method = "both";
  double gamma = 0.0;
  std::optional<double> ratio;
  std::optional<std::uint64_t> seed;
  std::optional<bool> normalize;
  CsSolverConfig cs;
  std::filesystem::path out_prefix;
  int coupled_samples = 1000;  // floor; warmed up, median reported
  int cs_samples = 10;
};

struct BenchmarkResult {
  double coupled_per_sample_seconds = 0.0;
  double cs_per_sample_seconds = 0.0;
  double train_seconds = -1.0;  // < 0 when unknown (no manifest)
  int coupled_samples = 0;
  int cs_samples = 0;
};

BenchmarkResult run_benchmark(const BenchmarkSpec& spec, std::ostream& out);

struct ReconstructSpec {
  std::filesystem::path model_path;
  std::filesystem::path in_csv;
  std::filesystem::path out_csv;
  std::optional<double> ratio;
  std::optional<std::uint64_t> seed;
  std::optional<bool> normalize;
};

struct ReconstructResult {
  Eigen::Index windows = 0;
  bool had_ground_truth = false;
};

// Input rows of length n are ground-truth windows (compressed before
// inversion, truth echoed in the output); rows of length m are taken as
// measurements. Output rows: index[, truth...], reconstruction...
ReconstructResult run_reconstruct(const ReconstructSpec& spec, std::ostream& out);

}  // namespace ctl::cli
