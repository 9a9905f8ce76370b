#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>

#include "ctl/manifest.hpp"
#include "ctl/sensing.hpp"

namespace ctl::cli {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

std::string fmt(const char* format, double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), format, value);
  return buffer;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

fs::path manifest_path_for(const fs::path& base) {
  return fs::path(base.string() + ".manifest");
}

Eigen::Index measurement_count(double ratio, Eigen::Index n) {
  if (!(ratio > 0.0) || ratio > 1.0) {
    throw std::invalid_argument("ratio must be in (0, 1], got " +
                                fmt("%g", ratio));
  }
  const auto m = static_cast<Eigen::Index>(std::llround(ratio * double(n)));
  return std::clamp<Eigen::Index>(m, 1, n);
}

struct SensingSetup {
  Eigen::Index n = 0;
  Eigen::Index m = 0;
  double ratio = 0.0;
  std::uint64_t seed = 0;
  bool normalize = false;
};

// Sensing parameters come from the model's manifest when present; explicit
// flags override ratio and seed. The same (n, m, seed) must govern train and
// test, and the manifest's normalization choice is authoritative so the two
// sides of the pipeline cannot disagree about preprocessing.
SensingSetup resolve_sensing(const fs::path& model_path, Eigen::Index data_n,
                             std::optional<double> ratio_flag,
                             std::optional<std::uint64_t> seed_flag,
                             std::optional<bool> normalize_flag) {
  SensingSetup setup;
  setup.n = data_n;
  std::optional<double> ratio = ratio_flag;
  std::optional<std::uint64_t> seed = seed_flag;
  std::optional<bool> normalize;
  if (!model_path.empty()) {
    const fs::path mpath = manifest_path_for(model_path);
    if (fs::exists(mpath)) {
      const Manifest manifest = Manifest::load(mpath);
      if (!ratio && manifest.contains("ratio")) {
        ratio = manifest.get_double("ratio");
      }
      if (!seed && manifest.contains("seed")) {
        seed = manifest.get_uint("seed");
      }
      if (manifest.contains("normalize")) {
        normalize = manifest.get("normalize") == "true";
      }
    }
  }
  if (!ratio) {
    throw std::invalid_argument(
        "no undersampling ratio: pass --ratio or keep the model's .manifest "
        "beside it");
  }
  if (!seed) {
    throw std::invalid_argument(
        "no sensing seed: pass --seed or keep the model's .manifest beside it");
  }
  setup.ratio = *ratio;
  setup.seed = *seed;
  setup.normalize = normalize.value_or(normalize_flag.value_or(false));
  setup.m = measurement_count(*ratio, data_n);
  return setup;
}

void write_objective_trace_csv(const fs::path& path, const TrainTrace& trace) {
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot open trace file for writing: " + path.string());
  }
  out << "iteration,total,fidelity_measurement,fidelity_signal,regularizer,"
         "coupling\n";
  for (std::size_t i = 0; i < trace.objectives.size(); ++i) {
    const CoupledObjective& o = trace.objectives[i];
    out << i << ',' << fmt("%.17g", o.total) << ','
        << fmt("%.17g", o.fidelity_measurement) << ','
        << fmt("%.17g", o.fidelity_signal) << ','
        << fmt("%.17g", o.regularizer) << ',' << fmt("%.17g", o.coupling)
        << '\n';
  }
}

double median(std::vector<double> values) {
  if (values.empty()) {
    return 0.0;
  }
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  double result = values[mid];
  if (values.size() % 2 == 0) {
    const auto lower = std::max_element(values.begin(), values.begin() + mid);
    result = 0.5 * (result + *lower);
  }
  return result;
}

// Per-sample l1 weight: explicit gamma when given, otherwise grid multiplier
// times ||A^T y||_inf. multiplier == 0 means gamma is fixed.
struct GammaRule {
  double fixed = 0.0;
  double multiplier = 0.0;

  double operator()(const CsSolver& solver, const Eigen::VectorXd& y) const {
    if (fixed > 0.0) {
      return fixed;
    }
    return multiplier * solver.correlation_ceiling(y);
  }
};

GammaRule resolve_gamma(const SensingMatrix& phi, const Eigen::MatrixXd& basis,
                        double gamma_flag, const fs::path& train_csv,
                        const CsSolverConfig& config, bool normalize) {
  if (gamma_flag > 0.0) {
    return GammaRule{gamma_flag, 0.0};
  }
  if (train_csv.empty()) {
    throw std::invalid_argument(
        "cs-baseline needs --gamma or --train-csv (validation slice for the "
        "gamma grid search)");
  }
  Eigen::MatrixXd train = load_windows_csv(train_csv);
  if (train.rows() != phi.cols()) {
    throw DataError("validation windows have length " +
                    std::to_string(train.rows()) + ", sensing expects " +
                    std::to_string(phi.cols()));
  }
  if (normalize) {
    train = normalize_windows(train);
  }
  const Eigen::Index slice = std::min<Eigen::Index>(20, train.cols());
  const Eigen::MatrixXd validation = train.rightCols(slice);
  CsSolverConfig grid_config = config;
  grid_config.gamma = 1.0;  // per-sample gammas are set explicitly
  return GammaRule{0.0, select_gamma_multiplier(phi, basis, validation,
                                                grid_config)};
}

std::string pad(std::string text, std::size_t width) {
  if (text.size() < width) {
    text.append(width - text.size(), ' ');
  }
  return text;
}

// Rows are the statistics, columns the methods.
void print_stats_table(std::ostream& out, const std::string& metric,
                       const std::vector<MethodErrors>& methods,
                       bool use_rmse) {
  constexpr std::size_t kCol = 26;
  out << "metric " << metric << '\n';
  out << "  " << pad("", 14);
  for (const auto& m : methods) {
    out << pad(m.method, kCol);
  }
  out << '\n';
  auto row = [&](const char* label, auto cell) {
    out << "  " << pad(label, 14);
    for (const auto& m : methods) {
      out << pad(cell(use_rmse ? m.rmse_stats : m.nmse_stats), kCol);
    }
    out << '\n';
  };
  row("mean +/- std", [](const ErrorStats& s) {
    return fmt("%.6f", s.mean) + " +/- " + fmt("%.6f", s.std_dev);
  });
  row("max", [](const ErrorStats& s) { return fmt("%.6f", s.max); });
  row("min", [](const ErrorStats& s) { return fmt("%.6f", s.min); });
}

}  // namespace

void run_synth(const SynthSpec& spec, std::ostream& out) {
  if (spec.out.empty()) {
    throw std::invalid_argument("synth needs an output path (--out)");
  }
  const Eigen::MatrixXd windows = synth_signals(
      synth_kind_from_string(spec.kind), spec.count, spec.n, spec.seed,
      spec.noise_std);
  save_matrix_csv(spec.out, windows);

  Manifest manifest;
  manifest.set("command", "synth");
  manifest.set("kind", spec.kind);
  manifest.set("count", static_cast<std::int64_t>(spec.count));
  manifest.set("n", static_cast<std::int64_t>(spec.n));
  manifest.set("seed", spec.seed);
  manifest.set("noise_std", spec.noise_std);
  manifest.save(manifest_path_for(spec.out));

  out << "synth: wrote " << spec.count << " " << spec.kind << " windows of "
      << spec.n << " samples to " << spec.out.string() << '\n';
}

TrainResult run_train(const TrainSpec& spec, std::ostream& out) {
  if (spec.model_path.empty()) {
    throw std::invalid_argument("train needs a model output path (--model)");
  }
  Eigen::MatrixXd signals = load_windows_csv(spec.train_csv);
  if (spec.normalize) {
    signals = normalize_windows(signals);
  }
  const Eigen::Index n = signals.rows();
  const Eigen::Index m = measurement_count(spec.ratio, n);

  const SensingMatrix phi = bernoulli_matrix(m, n, spec.seed);
  const Eigen::MatrixXd measurements = compress(phi, signals);

  const auto start = Clock::now();
  auto [model, trace] = train(signals, measurements, spec.config);
  const double train_seconds = seconds_since(start);

  // Write to a temp name first so a failed run leaves no partial model.
  const fs::path tmp = fs::path(spec.model_path.string() + ".tmp");
  try {
    save_model(model, tmp);
    fs::rename(tmp, spec.model_path);
  } catch (...) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw;
  }
  write_objective_trace_csv(fs::path(spec.model_path.string() + ".trace.csv"),
                            trace);

  Manifest manifest;
  manifest.set("command", "train");
  manifest.set("method", "coupled");
  manifest.set("n", static_cast<std::int64_t>(n));
  manifest.set("m", static_cast<std::int64_t>(m));
  manifest.set("ratio", spec.ratio);
  manifest.set("seed", spec.seed);
  manifest.set("scale", phi.scale);
  manifest.set("lambda", spec.config.lambda);
  manifest.set("mu", spec.config.mu);
  manifest.set("max_iters", static_cast<std::int64_t>(spec.config.max_iters));
  manifest.set("rel_tol", spec.config.rel_tol);
  manifest.set("init", spec.config.init == TrainConfig::Init::Identity
                           ? "identity"
                           : "seeded-random-orthogonal");
  manifest.set("normalize", spec.normalize ? "true" : "false");
  manifest.set("train_windows", static_cast<std::int64_t>(signals.cols()));
  manifest.set("iterations_run",
               static_cast<std::int64_t>(trace.iterations_run));
  manifest.set("converged", trace.converged ? "true" : "false");
  manifest.set("final_objective", trace.objectives.back().total);
  manifest.set("train_seconds", train_seconds);
  manifest.set("metric", "nmse");
  manifest.set("train_csv", spec.train_csv.string());
  manifest.save(manifest_path_for(spec.model_path));

  out << "train: n=" << n << " m=" << m << " windows=" << signals.cols()
      << " iterations=" << trace.iterations_run
      << (trace.converged ? " (converged)" : " (max iterations)")
      << " objective=" << fmt("%.6g", trace.objectives.back().total)
      << " time=" << fmt("%.3f", train_seconds) << "s\n";
  out << "train: model " << spec.model_path.string() << '\n';

  return TrainResult{n, m, std::move(trace), train_seconds};
}

EvaluateResult run_evaluate(const EvaluateSpec& spec, std::ostream& out) {
  const bool want_coupled = spec.method == "coupled" || spec.method == "both";
  const bool want_cs = spec.method == "cs-baseline" || spec.method == "both";
  if (!want_coupled && !want_cs) {
    throw std::invalid_argument("unknown method: " + spec.method +
                                " (expected coupled, cs-baseline, or both)");
  }
  if (want_coupled && spec.model_path.empty()) {
    throw std::invalid_argument("evaluating the coupled method needs --model");
  }

  Eigen::MatrixXd signals = load_windows_csv(spec.test_csv);
  const SensingSetup sensing = resolve_sensing(
      spec.model_path, signals.rows(), spec.ratio, spec.seed, spec.normalize);
  if (sensing.normalize) {
    signals = normalize_windows(signals);
  }

  const SensingMatrix phi =
      bernoulli_matrix(sensing.m, sensing.n, sensing.seed);
  const Eigen::MatrixXd measurements = compress(phi, signals);
  const Eigen::Index window_count = signals.cols();

  EvaluateResult result;
  result.n = sensing.n;
  result.m = sensing.m;
  result.ratio = sensing.ratio;
  result.seed = sensing.seed;

  Manifest manifest;
  manifest.set("command", "evaluate");
  manifest.set("method", spec.method);
  manifest.set("n", static_cast<std::int64_t>(sensing.n));
  manifest.set("m", static_cast<std::int64_t>(sensing.m));
  manifest.set("ratio", sensing.ratio);
  manifest.set("seed", sensing.seed);
  manifest.set("scale", phi.scale);
  manifest.set("normalize", sensing.normalize ? "true" : "false");
  manifest.set("metric", "nmse");
  manifest.set("test_windows", static_cast<std::int64_t>(window_count));
  manifest.set("test_csv", spec.test_csv.string());

  if (want_coupled) {
    const CoupledModel model = load_model(spec.model_path);
    if (model.signal_dim() != sensing.n ||
        model.measurement_dim() != sensing.m) {
      throw DataError("model is " + std::to_string(model.signal_dim()) + "x" +
                      std::to_string(model.measurement_dim()) +
                      " but evaluation needs " + std::to_string(sensing.n) +
                      "x" + std::to_string(sensing.m));
    }
    const Eigen::MatrixXd recovered = reconstruct(model, measurements);
    MethodErrors errors;
    errors.method = "coupled";
    errors.nmse_values.reserve(window_count);
    errors.rmse_values.reserve(window_count);
    for (Eigen::Index c = 0; c < window_count; ++c) {
      errors.nmse_values.push_back(nmse(recovered.col(c), signals.col(c)));
      errors.rmse_values.push_back(rmse(recovered.col(c), signals.col(c)));
    }
    errors.nmse_stats = error_stats(errors.nmse_values);
    errors.rmse_stats = error_stats(errors.rmse_values);
    result.methods.push_back(std::move(errors));
    manifest.set("lambda", model.lambda);
    manifest.set("mu", model.mu);
    manifest.set("model_file", spec.model_path.string());
  }

  if (want_cs) {
    const Eigen::MatrixXd basis = dct_basis(sensing.n);
    const GammaRule gamma_rule = resolve_gamma(
        phi, basis, spec.gamma, spec.train_csv, spec.cs, sensing.normalize);
    CsSolverConfig config = spec.cs;
    config.gamma = gamma_rule.fixed > 0.0 ? gamma_rule.fixed : 1.0;
    const CsSolver solver(phi, basis, config);

    MethodErrors errors;
    errors.method = "cs-baseline";
    errors.nmse_values.reserve(window_count);
    errors.rmse_values.reserve(window_count);
    double total_iterations = 0.0;
    for (Eigen::Index c = 0; c < window_count; ++c) {
      const Eigen::VectorXd y = measurements.col(c);
      Eigen::VectorXd recovered;
      const double gamma = gamma_rule(solver, y);
      if (gamma > 0.0) {
        CsSolveStats stats;
        recovered = solver.reconstruct(y, gamma, &stats);
        total_iterations += stats.iterations;
      } else {
        recovered = Eigen::VectorXd::Zero(sensing.n);  // y == 0
      }
      errors.nmse_values.push_back(nmse(recovered, signals.col(c)));
      errors.rmse_values.push_back(rmse(recovered, signals.col(c)));
    }
    errors.nmse_stats = error_stats(errors.nmse_values);
    errors.rmse_stats = error_stats(errors.rmse_values);
    result.methods.push_back(std::move(errors));
    result.gamma_multiplier = gamma_rule.multiplier;
    result.mean_cs_iterations =
        total_iterations / static_cast<double>(window_count);
    if (gamma_rule.fixed > 0.0) {
      manifest.set("gamma", gamma_rule.fixed);
    } else {
      manifest.set("gamma_multiplier", gamma_rule.multiplier);
      manifest.set("gamma_rule", "multiplier * max|correlation|");
    }
    manifest.set("cs_max_iters", static_cast<std::int64_t>(spec.cs.max_iters));
    manifest.set("cs_rel_tol", spec.cs.rel_tol);
    manifest.set("cs_acceleration", spec.cs.acceleration ? "true" : "false");
    manifest.set("solver_iterations_mean", result.mean_cs_iterations);
    if (!spec.train_csv.empty()) {
      manifest.set("train_csv", spec.train_csv.string());
    }
  }

  out << "evaluate: n=" << sensing.n << " m=" << sensing.m
      << " ratio=" << fmt("%g", sensing.ratio) << " seed=" << sensing.seed
      << ", " << window_count << " test windows\n";
  print_stats_table(out, "nmse", result.methods, false);
  print_stats_table(out, "rmse", result.methods, true);

  if (!spec.out_prefix.empty()) {
    const fs::path table_path = fs::path(spec.out_prefix.string() + ".csv");
    std::ofstream table(table_path);
    if (!table) {
      throw DataError("cannot open table file for writing: " +
                      table_path.string());
    }
    table << "method,metric,ratio,count,mean,std,max,min\n";
    for (const auto& m : result.methods) {
      for (int use_rmse = 0; use_rmse < 2; ++use_rmse) {
        const ErrorStats& s = use_rmse ? m.rmse_stats : m.nmse_stats;
        table << m.method << ',' << (use_rmse ? "rmse" : "nmse") << ','
              << fmt("%.17g", sensing.ratio) << ',' << s.count << ','
              << fmt("%.17g", s.mean) << ',' << fmt("%.17g", s.std_dev) << ','
              << fmt("%.17g", s.max) << ',' << fmt("%.17g", s.min) << '\n';
      }
    }

    const fs::path errors_path =
        fs::path(spec.out_prefix.string() + ".errors.csv");
    std::ofstream errors_file(errors_path);
    if (!errors_file) {
      throw DataError("cannot open errors file for writing: " +
                      errors_path.string());
    }
    errors_file << "window,method,nmse,rmse\n";
    for (const auto& m : result.methods) {
      for (std::size_t i = 0; i < m.nmse_values.size(); ++i) {
        errors_file << i << ',' << m.method << ','
                    << fmt("%.17g", m.nmse_values[i]) << ','
                    << fmt("%.17g", m.rmse_values[i]) << '\n';
      }
    }
    manifest.save(fs::path(spec.out_prefix.string() + ".manifest"));
    out << "evaluate: tables " << table_path.string() << ", "
        << errors_path.string() << '\n';
  }
  return result;
}

BenchmarkResult run_benchmark(const BenchmarkSpec& spec, std::ostream& out) {
  const bool want_coupled = spec.method == "coupled" || spec.method == "both";
  const bool want_cs = spec.method == "cs-baseline" || spec.method == "both";
  if (!want_coupled && !want_cs) {
    throw std::invalid_argument("unknown method: " + spec.method);
  }
  Eigen::MatrixXd signals = load_windows_csv(spec.test_csv);
  const SensingSetup sensing = resolve_sensing(
      spec.model_path, signals.rows(), spec.ratio, spec.seed, spec.normalize);
  if (sensing.normalize) {
    signals = normalize_windows(signals);
  }
  const SensingMatrix phi =
      bernoulli_matrix(sensing.m, sensing.n, sensing.seed);
  const Eigen::MatrixXd measurements = compress(phi, signals);
  const Eigen::Index window_count = measurements.cols();

  BenchmarkResult result;
  // Accumulated into a volatile sink so the timed calls cannot be elided.
  double checksum = 0.0;

  if (want_coupled) {
    const CoupledModel model = load_model(spec.model_path);
    if (model.measurement_dim() != sensing.m) {
      throw DataError("model does not match the requested sensing setup");
    }
    const fs::path mpath = manifest_path_for(spec.model_path);
    if (fs::exists(mpath)) {
      const Manifest manifest = Manifest::load(mpath);
      if (manifest.contains("train_seconds")) {
        result.train_seconds = manifest.get_double("train_seconds");
      }
    }

    const int samples = std::max(spec.coupled_samples, 1000);
    for (int i = 0; i < 50; ++i) {  // warmup
      checksum += reconstruct(model, Eigen::VectorXd(measurements.col(
                                         i % window_count)))
                      .sum();
    }
    std::vector<double> times;
    times.reserve(samples);
    for (int i = 0; i < samples; ++i) {
      const Eigen::VectorXd y = measurements.col(i % window_count);
      const auto start = Clock::now();
      const Eigen::VectorXd x_hat = reconstruct(model, y);
      times.push_back(seconds_since(start));
      checksum += x_hat(0);
    }
    result.coupled_per_sample_seconds = median(std::move(times));
    result.coupled_samples = samples;
  }

  if (want_cs) {
    const Eigen::MatrixXd basis = dct_basis(sensing.n);
    const GammaRule gamma_rule = resolve_gamma(
        phi, basis, spec.gamma, spec.train_csv, spec.cs, sensing.normalize);
    CsSolverConfig config = spec.cs;
    config.gamma = gamma_rule.fixed > 0.0 ? gamma_rule.fixed : 1.0;
    const CsSolver solver(phi, basis, config);

    const int samples = std::max(
        1, static_cast<int>(std::min<Eigen::Index>(spec.cs_samples, window_count)));
    checksum += solver
                    .reconstruct(measurements.col(0),
                                 std::max(gamma_rule(solver, measurements.col(0)),
                                          1e-12))
                    .sum();  // warmup
    std::vector<double> times;
    times.reserve(samples);
    for (int i = 0; i < samples; ++i) {
      const Eigen::VectorXd y = measurements.col(i);
      const double gamma = std::max(gamma_rule(solver, y), 1e-12);
      const auto start = Clock::now();
      const Eigen::VectorXd x_hat = solver.reconstruct(y, gamma);
      times.push_back(seconds_since(start));
      checksum += x_hat(0);
    }
    result.cs_per_sample_seconds = median(std::move(times));
    result.cs_samples = samples;
  }

  static volatile double sink = 0.0;
  sink = sink + checksum;
  out << "benchmark: n=" << sensing.n << " m=" << sensing.m
      << " ratio=" << fmt("%g", sensing.ratio) << '\n';
  out << "  method        train_s       per_sample_s   samples\n";
  if (want_coupled) {
    out << "  coupled       "
        << (result.train_seconds >= 0.0 ? fmt("%-13.3f", result.train_seconds)
                                        : std::string("-            "))
        << " " << fmt("%-14.3e", result.coupled_per_sample_seconds) << " "
        << result.coupled_samples << '\n';
  }
  if (want_cs) {
    out << "  cs-baseline   -             "
        << fmt("%-14.3e", result.cs_per_sample_seconds) << " "
        << result.cs_samples << '\n';
  }

  if (!spec.out_prefix.empty()) {
    const fs::path table_path = fs::path(spec.out_prefix.string() + ".csv");
    std::ofstream table(table_path);
    if (!table) {
      throw DataError("cannot open table file for writing: " +
                      table_path.string());
    }
    table << "method,train_seconds,per_sample_seconds,samples\n";
    if (want_coupled) {
      table << "coupled,"
            << (result.train_seconds >= 0.0
                    ? fmt("%.17g", result.train_seconds)
                    : std::string(""))
            << ',' << fmt("%.17g", result.coupled_per_sample_seconds) << ','
            << result.coupled_samples << '\n';
    }
    if (want_cs) {
      table << "cs-baseline,," << fmt("%.17g", result.cs_per_sample_seconds)
            << ',' << result.cs_samples << '\n';
    }
  }
  return result;
}

ReconstructResult run_reconstruct(const ReconstructSpec& spec,
                                  std::ostream& out) {
  const CoupledModel model = load_model(spec.model_path);
  const Eigen::MatrixXd input = load_windows_csv(spec.in_csv);
  const Eigen::Index n = model.signal_dim();
  const Eigen::Index m = model.measurement_dim();

  ReconstructResult result;
  Eigen::MatrixXd measurements;
  const Eigen::MatrixXd* truth = nullptr;
  Eigen::MatrixXd normalized_input;
  if (input.rows() == n) {
    // Ground-truth windows: compress with the training sensing matrix.
    const SensingSetup sensing = resolve_sensing(spec.model_path, n, spec.ratio,
                                                 spec.seed, spec.normalize);
    if (sensing.m != m) {
      throw DataError("sensing setup gives m = " + std::to_string(sensing.m) +
                      " but the model expects " + std::to_string(m));
    }
    const SensingMatrix phi = bernoulli_matrix(m, n, sensing.seed);
    if (sensing.normalize) {
      normalized_input = normalize_windows(input);
      measurements = compress(phi, normalized_input);
      truth = &normalized_input;
    } else {
      measurements = compress(phi, input);
      truth = &input;
    }
    result.had_ground_truth = true;
  } else if (input.rows() == m) {
    measurements = input;
  } else {
    throw DataError("input windows have length " +
                    std::to_string(input.rows()) + "; the model expects " +
                    std::to_string(n) + " (ground truth) or " +
                    std::to_string(m) + " (measurements)");
  }

  const Eigen::MatrixXd recovered = reconstruct(model, measurements);
  result.windows = recovered.cols();

  std::ofstream file(spec.out_csv);
  if (!file) {
    throw DataError("cannot open output file for writing: " +
                    spec.out_csv.string());
  }
  char buffer[40];
  for (Eigen::Index c = 0; c < recovered.cols(); ++c) {
    std::string line = std::to_string(c);
    if (truth) {
      for (Eigen::Index j = 0; j < n; ++j) {
        std::snprintf(buffer, sizeof(buffer), "%.17g", (*truth)(j, c));
        line += ',';
        line += buffer;
      }
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      std::snprintf(buffer, sizeof(buffer), "%.17g", recovered(j, c));
      line += ',';
      line += buffer;
    }
    file << line << '\n';
  }
  if (!file) {
    throw DataError("failed while writing: " + spec.out_csv.string());
  }

  out << "reconstruct: " << result.windows << " windows -> "
      << spec.out_csv.string()
      << (result.had_ground_truth ? " (with ground truth)" : "") << '\n';
  return result;
}

}  // namespace ctl::cli
