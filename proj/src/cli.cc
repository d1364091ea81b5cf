/*
 * Copyright 2026 The Overfit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "overfit/cli.h"

#include <cstdint>
#include <fstream>
#include <optional>

#include "CLI11.hpp"
#include "overfit/error.h"
#include "overfit/hoeffding.h"
#include "overfit/io.h"
#include "overfit/margin.h"
#include "overfit/overfit_test.h"
#include "overfit/simulation.h"

namespace overfit::cli {
namespace {

struct Output {
  std::string path;

  void emit(const Json& json, std::ostream& out) const {
    const std::string text = json.dump(2) + "\n";
    if (path.empty()) {
      out << text;
      return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!(file << text)) {
      throw Error(ErrorKind::kParseError, path + ": cannot write output");
    }
  }
};

struct SpecFlags {
  std::string family = "constant-zero";
  std::uint32_t n = 10;
  double eta = 0.0;
  std::uint64_t m = 100;
  std::uint64_t m_prime = 200;
  std::uint64_t k = 1;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::uint64_t oracle_draws = 100000;

  void attach(CLI::App& app) {
    app.add_option("--family", family, "Model family")
        ->check(CLI::IsMember({"memorizer", "constant-zero", "parity-oracle"}))
        ->capture_default_str();
    app.add_option("--n", n, "Size of the uniform x domain")->capture_default_str();
    app.add_option("--eta", eta, "Label noise rate in [0, 0.5)")->capture_default_str();
    app.add_option("--m", m, "Training set size")->capture_default_str();
    app.add_option("--m-prime", m_prime, "Holdout set size")->capture_default_str();
    app.add_option("--k", k, "Number of models (margin experiments)")
        ->capture_default_str();
    app.add_option("--trials", trials, "Monte Carlo trials")->capture_default_str();
    app.add_option("--seed", seed, "64-bit seed")->required();
    app.add_option("--threads", threads, "Worker threads (0 = all cores)")
        ->capture_default_str();
    app.add_option("--oracle-draws", oracle_draws,
                   "Training draws for the mean-margin oracle")
        ->capture_default_str();
  }

  SimulationSpec build() const {
    SimulationSpec spec;
    spec.joint = DiscreteJoint::uniform(n, eta);
    spec.model = *parse_model_family(family);
    spec.m = m;
    spec.m_prime = m_prime;
    spec.k = k;
    spec.trials = trials;
    spec.seed = seed;
    spec.threads = threads;
    spec.oracle_draws = oracle_draws;
    return spec;
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Holdout-based overfitting tests with explicit Hoeffding bounds"};
  app.require_subcommand(1);
  Output output;
  app.add_option("--out", output.path, "Write the JSON result to this file");
  int exit_code = kExitOk;

  // test
  std::string train_path;
  std::string holdout_path;
  double test_epsilon = 0.0;
  std::optional<double> alpha;
  std::optional<double> probe_lo;
  std::optional<double> probe_hi;
  CLI::App* test = app.add_subcommand("test", "Test one model for overfitting");
  test->add_option("train", train_path, "Training cost file")->required();
  test->add_option("holdout", holdout_path, "Holdout cost file")->required();
  test->add_option("--epsilon", test_epsilon, "Gap threshold in (0,1)")->required();
  test->add_option("--alpha", alpha, "Reject only if the bound is <= alpha");
  CLI::Option* lo_opt = test->add_option("--probe-lo", probe_lo, "Probe range low end");
  CLI::Option* hi_opt = test->add_option("--probe-hi", probe_hi, "Probe range high end");
  lo_opt->needs(hi_opt);
  hi_opt->needs(lo_opt);
  test->callback([&] {
    TestConfig config{test_epsilon, alpha, {}};
    if (probe_lo) config.probe_range = ProbeRange{*probe_lo, *probe_hi};
    config.validate();
    const std::vector<double> train = read_cost_file(train_path, config.probe_range);
    const std::vector<double> holdout = read_cost_file(holdout_path, config.probe_range);
    const TestReport report = run_test(train, holdout, config);
    output.emit(to_json(report), out);
    exit_code = report.decision == Decision::kNullRejected ? kExitRejected : kExitOk;
  });

  // solve
  HoeffdingQuery query;
  CLI::App* solve =
      app.add_subcommand("solve", "Solve delta = 2 exp(-2 eps^2 m) for the missing value");
  solve->add_option("--epsilon", query.epsilon, "Precision in (0,1)");
  solve->add_option("--delta", query.delta, "Failure probability");
  solve->add_option("--m", query.m, "Sample size");
  solve->add_option("--log-delta", query.log_delta,
                    "Natural log of delta, in place of --delta");
  solve->callback([&] {
    const int given = query.epsilon.has_value() + query.delta.has_value() +
                      query.log_delta.has_value() + query.m.has_value();
    if (given != 2 || (query.delta && query.log_delta)) {
      throw CLI::ValidationError(
          "solve", "exactly two of --epsilon, --delta (or --log-delta), --m are required");
    }
    output.emit(to_json(solve_hoeffding(query)), out);
  });

  // margin
  std::string runs_path;
  double margin_epsilon = 0.0;
  double margin_delta = 0.0;
  CLI::App* margin =
      app.add_subcommand("margin", "Estimate the mean overfitting margin from k runs");
  margin->add_option("runs", runs_path, "JSONL run-set file")->required();
  margin->add_option("--epsilon", margin_epsilon, "Precision in (0,1)")->required();
  margin->add_option("--delta", margin_delta, "Confidence parameter in (0,1)")
      ->required();
  margin->callback([&] {
    const MarginRunSet runs = read_run_set_file(runs_path);
    output.emit(to_json(estimate_mean_margin(runs, margin_epsilon, margin_delta)), out);
  });

  // simulate
  SpecFlags sim_flags;
  double sim_epsilon = 0.0;
  std::uint64_t epochs = 10;
  std::string mode = "curve";
  CLI::App* simulate =
      app.add_subcommand("simulate", "Run a synthetic experiment");
  sim_flags.attach(*simulate);
  simulate->add_option("--epsilon", sim_epsilon, "Gap threshold in (0,1)")->required();
  simulate->add_option("--mode", mode, "curve | power | in-sample")
      ->check(CLI::IsMember({"curve", "power", "in-sample"}))
      ->capture_default_str();
  simulate->add_option("--epochs", epochs, "Epochs for the training curve")
      ->capture_default_str();
  simulate->callback([&] {
    const SimulationSpec spec = sim_flags.build();
    if (mode == "curve") {
      output.emit(to_json(epoch_curve(spec, epochs, sim_epsilon)), out);
    } else if (mode == "power") {
      output.emit(to_json(detection_power(spec, sim_epsilon)), out);
    } else {
      output.emit(to_json(in_sample_gap(spec, sim_epsilon)), out);
    }
  });

  // validate-bounds
  SpecFlags val_flags;
  std::string kind_name;
  double val_epsilon = 0.0;
  double val_delta = 0.05;
  CLI::App* validate = app.add_subcommand(
      "validate-bounds", "Monte Carlo check of a probability bound");
  val_flags.attach(*validate);
  validate->add_option("--kind", kind_name, "fixed-model | overfit-test | margin-estimate")
      ->check(CLI::IsMember({"fixed-model", "overfit-test", "margin-estimate"}))
      ->required();
  validate->add_option("--epsilon", val_epsilon, "Precision in (0,1)")->required();
  validate->add_option("--delta", val_delta, "Confidence parameter (margin-estimate)")
      ->capture_default_str();
  validate->callback([&] {
    const ValidationRecord record = validate_bound(
        val_flags.build(), *parse_bound_kind(kind_name), val_epsilon, val_delta);
    output.emit(to_json(record), out);
    exit_code = record.pass ? kExitOk : kExitRejected;
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      // --help and friends.
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error (" << error_kind_name(e.kind()) << "): " << e.what() << "\n";
    return e.kind() == ErrorKind::kDomainError ? kExitUsage : kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return exit_code;
}

}  // namespace overfit::cli
