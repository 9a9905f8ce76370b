#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "commands.hpp"
#include "ctl/errors.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "ctl - learns a linear inverse of random signal compression via "
      "coupled transform learning, with an l1/DCT compressed-sensing "
      "baseline"};
  app.require_subcommand(1);

  ctl::cli::SynthSpec synth;
  CLI::App* synth_cmd =
      app.add_subcommand("synth", "generate synthetic signal windows (CSV)");
  synth_cmd->add_option("--kind", synth.kind, "harmonic or pulse-train")
      ->capture_default_str();
  synth_cmd->add_option("--count", synth.count, "number of windows")
      ->capture_default_str();
  synth_cmd->add_option("--n", synth.n, "window length")->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "generator seed")
      ->capture_default_str();
  synth_cmd->add_option("--noise-std", synth.noise_std, "white noise level")
      ->capture_default_str();
  synth_cmd->add_option("--out", synth.out, "output CSV path")->required();

  ctl::cli::TrainSpec train;
  std::string init_scheme = "identity";
  CLI::App* train_cmd =
      app.add_subcommand("train", "train a coupled model on signal windows");
  train_cmd->add_option("--train-csv", train.train_csv, "training windows CSV")
      ->required();
  train_cmd->add_option("--ratio", train.ratio, "undersampling ratio m/n")
      ->capture_default_str();
  train_cmd->add_option("--seed", train.seed, "sensing matrix seed")
      ->capture_default_str();
  train_cmd->add_option("--lambda", train.config.lambda, "transform regularizer")
      ->capture_default_str();
  train_cmd->add_option("--mu", train.config.mu, "coupling weight")
      ->capture_default_str();
  train_cmd
      ->add_option("--max-iters", train.config.max_iters,
                   "alternating minimization cap")
      ->capture_default_str();
  train_cmd
      ->add_option("--tol", train.config.rel_tol,
                   "relative objective change to declare convergence")
      ->capture_default_str();
  train_cmd
      ->add_option("--init", init_scheme, "identity or random-orthogonal")
      ->capture_default_str();
  train_cmd->add_flag("--normalize", train.normalize,
                      "per-window zero-mean/unit-norm preprocessing");
  train_cmd->add_option("--model", train.model_path, "model output path")
      ->required();

  ctl::cli::EvaluateSpec evaluate;
  CLI::App* evaluate_cmd = app.add_subcommand(
      "evaluate", "error tables for coupled and/or cs-baseline");
  evaluate_cmd->add_option("--model", evaluate.model_path, "trained model");
  evaluate_cmd->add_option("--test-csv", evaluate.test_csv, "test windows CSV")
      ->required();
  evaluate_cmd->add_option("--train-csv", evaluate.train_csv,
                           "training CSV (gamma grid validation slice)");
  evaluate_cmd
      ->add_option("--method", evaluate.method,
                   "coupled, cs-baseline, or both")
      ->capture_default_str();
  evaluate_cmd->add_option("--gamma", evaluate.gamma,
                           "fixed l1 weight (0 = grid search)");
  evaluate_cmd->add_option("--ratio", evaluate.ratio,
                           "override the model manifest's ratio");
  evaluate_cmd->add_option("--seed", evaluate.seed,
                           "override the model manifest's seed");
  evaluate_cmd
      ->add_option("--max-iters", evaluate.cs.max_iters, "cs solver cap")
      ->capture_default_str();
  evaluate_cmd
      ->add_option("--tol", evaluate.cs.rel_tol, "cs solver tolerance")
      ->capture_default_str();
  evaluate_cmd->add_flag("--plain,!--accelerated",
                         [&evaluate](std::int64_t count) {
                           evaluate.cs.acceleration = count <= 0;
                         },
                         "plain shrinkage iterations instead of accelerated");
  evaluate_cmd->add_flag(
      "--normalize", [&evaluate](std::int64_t) { evaluate.normalize = true; },
      "normalize windows (the model manifest wins when present)");
  evaluate_cmd->add_option("--out", evaluate.out_prefix,
                           "prefix for .csv/.errors.csv/.manifest outputs");

  ctl::cli::BenchmarkSpec benchmark;
  CLI::App* benchmark_cmd = app.add_subcommand(
      "benchmark", "per-sample reconstruction timing table");
  benchmark_cmd->add_option("--model", benchmark.model_path, "trained model");
  benchmark_cmd
      ->add_option("--test-csv", benchmark.test_csv, "test windows CSV")
      ->required();
  benchmark_cmd->add_option("--train-csv", benchmark.train_csv,
                            "training CSV (gamma grid validation slice)");
  benchmark_cmd
      ->add_option("--method", benchmark.method,
                   "coupled, cs-baseline, or both")
      ->capture_default_str();
  benchmark_cmd->add_option("--gamma", benchmark.gamma,
                            "fixed l1 weight (0 = grid search)");
  benchmark_cmd->add_option("--ratio", benchmark.ratio, "override ratio");
  benchmark_cmd->add_option("--seed", benchmark.seed, "override seed");
  benchmark_cmd
      ->add_option("--max-iters", benchmark.cs.max_iters, "cs solver cap")
      ->capture_default_str();
  benchmark_cmd->add_option("--tol", benchmark.cs.rel_tol, "cs solver tolerance")
      ->capture_default_str();
  benchmark_cmd
      ->add_option("--samples", benchmark.coupled_samples,
                   "coupled timing samples (min 1000)")
      ->capture_default_str();
  benchmark_cmd
      ->add_option("--cs-samples", benchmark.cs_samples,
                   "cs-baseline timing samples")
      ->capture_default_str();
  benchmark_cmd->add_flag(
      "--normalize", [&benchmark](std::int64_t) { benchmark.normalize = true; },
      "normalize windows (the model manifest wins when present)");
  benchmark_cmd->add_option("--out", benchmark.out_prefix,
                            "prefix for the .csv output");

  ctl::cli::ReconstructSpec reconstruct;
  CLI::App* reconstruct_cmd = app.add_subcommand(
      "reconstruct", "invert measurements (or compressed ground truth) to CSV");
  reconstruct_cmd->add_option("--model", reconstruct.model_path, "trained model")
      ->required();
  reconstruct_cmd
      ->add_option("--test-csv", reconstruct.in_csv,
                   "input CSV (rows of length n: ground truth; length m: "
                   "measurements)")
      ->required();
  reconstruct_cmd->add_option("--out", reconstruct.out_csv, "output CSV path")
      ->required();
  reconstruct_cmd->add_option("--ratio", reconstruct.ratio, "override ratio");
  reconstruct_cmd->add_option("--seed", reconstruct.seed, "override seed");
  reconstruct_cmd->add_flag(
      "--normalize",
      [&reconstruct](std::int64_t) { reconstruct.normalize = true; },
      "normalize windows (the model manifest wins when present)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (synth_cmd->parsed()) {
      ctl::cli::run_synth(synth, std::cout);
    } else if (train_cmd->parsed()) {
      if (init_scheme == "identity") {
        train.config.init = ctl::TrainConfig::Init::Identity;
      } else if (init_scheme == "random-orthogonal") {
        train.config.init = ctl::TrainConfig::Init::RandomOrthogonal;
      } else {
        throw std::invalid_argument("unknown init scheme: " + init_scheme);
      }
      ctl::cli::run_train(train, std::cout);
    } else if (evaluate_cmd->parsed()) {
      ctl::cli::run_evaluate(evaluate, std::cout);
    } else if (benchmark_cmd->parsed()) {
      ctl::cli::run_benchmark(benchmark, std::cout);
    } else if (reconstruct_cmd->parsed()) {
      ctl::cli::run_reconstruct(reconstruct, std::cout);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ctl::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const ctl::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return 0;
}
