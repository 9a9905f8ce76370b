#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "ctl/manifest.hpp"

namespace fs = std::filesystem;

namespace {

struct ScratchDir {
  fs::path path;
  explicit ScratchDir(const char* name) {
    path = fs::temp_directory_path() / name;
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~ScratchDir() { fs::remove_all(path); }
  fs::path operator/(const char* leaf) const { return path / leaf; }
};

int run_binary(const std::string& args) {
  const std::string command =
      std::string(CTL_CLI_BIN) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_CASE("synth/train/evaluate/reconstruct pipeline") {
  ScratchDir dir("ctl_cli_pipeline");
  std::ostringstream log;

  ctl::cli::SynthSpec synth;
  synth.kind = "harmonic";
  synth.count = 100;
  synth.n = 32;
  synth.seed = 11;
  synth.out = dir / "train.csv";
  ctl::cli::run_synth(synth, log);
  REQUIRE(fs::exists(synth.out));

  ctl::cli::SynthSpec test_synth = synth;
  test_synth.count = 30;
  test_synth.seed = 12;
  test_synth.out = dir / "test.csv";
  ctl::cli::run_synth(test_synth, log);

  ctl::cli::TrainSpec train;
  train.train_csv = dir / "train.csv";
  train.ratio = 0.5;
  train.seed = 5;
  train.model_path = dir / "model.ctl";
  train.config.max_iters = 80;
  const auto trained = ctl::cli::run_train(train, log);
  CHECK(trained.n == 32);
  CHECK(trained.m == 16);
  REQUIRE(fs::exists(train.model_path));
  REQUIRE(fs::exists(dir / "model.ctl.manifest"));
  REQUIRE(fs::exists(dir / "model.ctl.trace.csv"));
  for (std::size_t i = 1; i < trained.trace.objectives.size(); ++i) {
    CHECK(trained.trace.objectives[i].total <=
          trained.trace.objectives[i - 1].total +
              1e-9 * std::abs(trained.trace.objectives[i - 1].total));
  }
  const ctl::Manifest manifest = ctl::Manifest::load(dir / "model.ctl.manifest");
  CHECK(manifest.get_int("n") == 32);
  CHECK(manifest.get_int("m") == 16);
  CHECK(manifest.get_uint("seed") == 5);
  CHECK(manifest.get("metric") == std::string("nmse"));
  CHECK(manifest.contains("train_seconds"));

  ctl::cli::EvaluateSpec evaluate;
  evaluate.model_path = train.model_path;
  evaluate.test_csv = dir / "test.csv";
  evaluate.train_csv = dir / "train.csv";
  evaluate.method = "both";
  evaluate.cs.max_iters = 200;
  evaluate.out_prefix = dir / "eval";
  const auto result = ctl::cli::run_evaluate(evaluate, log);
  REQUIRE(result.methods.size() == 2);
  CHECK(result.methods[0].method == "coupled");
  CHECK(result.methods[1].method == "cs-baseline");
  CHECK(result.methods[0].nmse_stats.count == 30);
  CHECK(result.methods[0].nmse_stats.mean >= 0.0);
  CHECK(result.gamma_multiplier > 0.0);
  REQUIRE(fs::exists(dir / "eval.csv"));
  REQUIRE(fs::exists(dir / "eval.errors.csv"));
  REQUIRE(fs::exists(dir / "eval.manifest"));

  SUBCASE("evaluation is deterministic byte for byte") {
    const std::string first_table = slurp(dir / "eval.csv");
    const std::string first_errors = slurp(dir / "eval.errors.csv");
    ctl::cli::run_evaluate(evaluate, log);
    CHECK(slurp(dir / "eval.csv") == first_table);
    CHECK(slurp(dir / "eval.errors.csv") == first_errors);
  }

  SUBCASE("reconstruct output re-feeds to the same per-window errors") {
    ctl::cli::ReconstructSpec reconstruct;
    reconstruct.model_path = train.model_path;
    reconstruct.in_csv = dir / "test.csv";
    reconstruct.out_csv = dir / "recon.csv";
    const auto recon = ctl::cli::run_reconstruct(reconstruct, log);
    CHECK(recon.windows == 30);
    CHECK(recon.had_ground_truth);

    const Eigen::MatrixXd rows = ctl::load_windows_csv(dir / "recon.csv");
    REQUIRE(rows.rows() == 1 + 32 + 32);  // index, truth, reconstruction
    REQUIRE(rows.cols() == 30);
    for (Eigen::Index c = 0; c < rows.cols(); ++c) {
      const Eigen::VectorXd truth = rows.col(c).segment(1, 32);
      const Eigen::VectorXd recovered = rows.col(c).segment(33, 32);
      const double err = ctl::nmse(recovered, truth);
      CHECK(std::abs(err - result.methods[0].nmse_values[c]) <=
            1e-12 * (1.0 + err));
    }
  }

  SUBCASE("benchmark reports both methods") {
    ctl::cli::BenchmarkSpec benchmark;
    benchmark.model_path = train.model_path;
    benchmark.test_csv = dir / "test.csv";
    benchmark.train_csv = dir / "train.csv";
    benchmark.cs.max_iters = 50;
    benchmark.cs_samples = 3;
    benchmark.out_prefix = dir / "bench";
    const auto timing = ctl::cli::run_benchmark(benchmark, log);
    CHECK(timing.coupled_per_sample_seconds > 0.0);
    CHECK(timing.cs_per_sample_seconds > 0.0);
    // The one-matvec inversion beats the iterative baseline even at n = 32.
    CHECK(timing.coupled_per_sample_seconds < timing.cs_per_sample_seconds);
    CHECK(timing.coupled_samples >= 1000);
    CHECK(timing.train_seconds >= 0.0);  // from the train manifest
    CHECK(fs::exists(dir / "bench.csv"));
  }
}

TEST_CASE("full-ratio consistent run reconstructs to machine-level error") {
  ScratchDir dir("ctl_cli_fullratio");
  std::ostringstream log;

  ctl::cli::SynthSpec synth;
  synth.count = 60;
  synth.n = 16;
  synth.seed = 21;
  synth.out = dir / "train.csv";
  ctl::cli::run_synth(synth, log);
  ctl::cli::SynthSpec test_synth = synth;
  test_synth.count = 20;
  test_synth.seed = 22;
  test_synth.out = dir / "test.csv";
  ctl::cli::run_synth(test_synth, log);

  ctl::cli::TrainSpec train;
  train.train_csv = dir / "train.csv";
  train.ratio = 1.0;
  train.seed = 23;
  train.config.lambda = 1e-6;
  train.model_path = dir / "model.ctl";
  ctl::cli::run_train(train, log);

  ctl::cli::EvaluateSpec evaluate;
  evaluate.model_path = train.model_path;
  evaluate.test_csv = dir / "test.csv";
  evaluate.method = "coupled";
  const auto result = ctl::cli::run_evaluate(evaluate, log);
  REQUIRE(result.methods.size() == 1);
  CHECK(result.methods[0].nmse_stats.mean <= 1e-6);
}

TEST_CASE("normalized pipeline stays consistent between train and evaluate") {
  ScratchDir dir("ctl_cli_normalize");
  std::ostringstream log;

  ctl::cli::SynthSpec synth;
  synth.count = 80;
  synth.n = 16;
  synth.seed = 31;
  synth.noise_std = 0.05;
  synth.out = dir / "train.csv";
  ctl::cli::run_synth(synth, log);
  ctl::cli::SynthSpec test_synth = synth;
  test_synth.count = 20;
  test_synth.seed = 32;
  test_synth.out = dir / "test.csv";
  ctl::cli::run_synth(test_synth, log);

  ctl::cli::TrainSpec train;
  train.train_csv = dir / "train.csv";
  train.ratio = 1.0;
  train.seed = 33;
  train.normalize = true;
  train.config.lambda = 1e-6;
  train.model_path = dir / "model.ctl";
  ctl::cli::run_train(train, log);
  const ctl::Manifest manifest = ctl::Manifest::load(dir / "model.ctl.manifest");
  CHECK(manifest.get("normalize") == std::string("true"));

  // The manifest propagates the preprocessing, so the consistent-system
  // property holds on normalized windows too.
  ctl::cli::EvaluateSpec evaluate;
  evaluate.model_path = train.model_path;
  evaluate.test_csv = dir / "test.csv";
  evaluate.method = "coupled";
  const auto result = ctl::cli::run_evaluate(evaluate, log);
  CHECK(result.methods[0].nmse_stats.mean <= 1e-6);
}

TEST_CASE("train leaves no partial model behind on bad input") {
  ScratchDir dir("ctl_cli_badinput");
  std::ostringstream log;
  ctl::cli::TrainSpec train;
  train.train_csv = dir / "does_not_exist.csv";
  train.model_path = dir / "model.ctl";
  CHECK_THROWS_AS(ctl::cli::run_train(train, log), ctl::DataError);
  CHECK(!fs::exists(train.model_path));
  CHECK(!fs::exists(dir / "model.ctl.manifest"));
}

TEST_CASE("binary exit codes") {
  ScratchDir dir("ctl_cli_binary");

  CHECK(run_binary("--help") == 0);
  CHECK(run_binary("synth --help") == 0);
  CHECK(run_binary("--no-such-flag") == 1);
  CHECK(run_binary("synth") == 1);  // missing required --out

  const std::string missing_train =
      "train --train-csv " + (dir / "missing.csv").string() + " --model " +
      (dir / "model.ctl").string();
  CHECK(run_binary(missing_train) == 2);
  CHECK(!fs::exists(dir / "model.ctl"));

  const std::string synth_cmd = "synth --kind harmonic --count 40 --n 16 "
                                "--seed 2 --out " +
                                (dir / "train.csv").string();
  CHECK(run_binary(synth_cmd) == 0);
  CHECK(run_binary("synth --kind nosuch --out " + (dir / "x.csv").string()) ==
        1);

  const std::string train_cmd =
      "train --train-csv " + (dir / "train.csv").string() +
      " --ratio 0.5 --seed 3 --max-iters 30 --model " +
      (dir / "model.ctl").string();
  CHECK(run_binary(train_cmd) == 0);
  CHECK(fs::exists(dir / "model.ctl"));

  // Evaluating with mismatched data dimensions is a data error.
  const std::string synth_wrong =
      "synth --kind harmonic --count 10 --n 24 --seed 4 --out " +
      (dir / "wrong.csv").string();
  CHECK(run_binary(synth_wrong) == 0);
  const std::string eval_wrong =
      "evaluate --model " + (dir / "model.ctl").string() + " --test-csv " +
      (dir / "wrong.csv").string() + " --method coupled";
  CHECK(run_binary(eval_wrong) == 2);
}
