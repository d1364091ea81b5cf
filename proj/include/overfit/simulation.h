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

// Synthetic harness: genuinely trained models on a known discrete
// distribution, exact expected costs, and Monte Carlo checks of every bound.
//
// Data: x ~ p over {0..n-1}, y = parity(x) flipped with probability eta.
// Cost: 0-1 loss. Every trial fixes its model before drawing the holdout
// set it is evaluated on; only then are the holdout costs iid and the
// concentration bounds applicable. Costs on the training set of a model
// fitted to that same set are not iid, and the harness reports that gap
// rather than hiding it (see in_sample_gap()).
//
// Randomness: trial t draws from RandomStream(seed, t), so results are a
// pure function of the spec, whatever the thread count.

#ifndef OVERFIT_SIMULATION_H_
#define OVERFIT_SIMULATION_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "overfit/hoeffding.h"
#include "overfit/philox.h"
#include "overfit/risk.h"

namespace overfit {

inline int parity(std::uint32_t x) { return static_cast<int>(x & 1u); }

class DiscreteJoint {
 public:
  // x_probs: nonnegative, summing to 1 within 1e-12. eta in [0, 0.5).
  // Throws Error{kDomainError} otherwise.
  DiscreteJoint(std::vector<double> x_probs, double eta);

  static DiscreteJoint uniform(std::uint32_t n, double eta);
  static DiscreteJoint point_mass(std::uint32_t n, std::uint32_t x, double eta);

  std::uint32_t domain_size() const {
    return static_cast<std::uint32_t>(probs_.size());
  }
  std::span<const double> x_probs() const { return probs_; }
  double probability(std::uint32_t x) const { return probs_[x]; }
  double eta() const { return eta_; }
  bool is_uniform() const { return uniform_; }
  // P(parity(x) = 1).
  double parity_one_mass() const { return parity_one_mass_; }

  std::uint32_t sample_x(RandomStream& stream) const;

 private:
  std::vector<double> probs_;
  std::vector<double> cdf_;
  double eta_;
  double parity_one_mass_ = 0.0;
  bool uniform_ = false;
};

struct LabeledSample {
  std::vector<std::uint32_t> x;
  std::vector<std::uint8_t> y;

  std::size_t size() const { return x.size(); }
};

// size iid draws from the joint. Throws Error{kDomainError} for size 0.
LabeledSample sample_dataset(const DiscreteJoint& joint, std::size_t size,
                             RandomStream& stream);

enum class ModelFamily {
  // Lookup table of seen x -> majority label (ties -> 0); unseen x -> 0.
  kMemorizer,
  kConstantZero,
  // Predicts parity(x): the Bayes rule.
  kParityOracle,
};

std::string_view model_family_name(ModelFamily family);
// Accepts "memorizer", "constant-zero", "parity-oracle".
std::optional<ModelFamily> parse_model_family(std::string_view name);

// True for families whose fitted model does not depend on the sample.
bool is_sample_independent(ModelFamily family);

struct MemorizedLabel {
  std::uint32_t x;
  std::uint8_t label;
};

class FittedModel {
 public:
  static FittedModel constant_zero() { return FittedModel(ModelFamily::kConstantZero, {}); }
  static FittedModel parity_oracle() { return FittedModel(ModelFamily::kParityOracle, {}); }
  // Majority-vote table over the sample; an empty sample gives an empty table.
  static FittedModel memorize(const LabeledSample& sample);

  ModelFamily family() const { return family_; }
  // Sorted by x; one entry per distinct x in the training sample.
  std::span<const MemorizedLabel> table() const { return table_; }

  int predict(std::uint32_t x) const;

 private:
  FittedModel(ModelFamily family, std::vector<MemorizedLabel> table)
      : family_(family), table_(std::move(table)) {}

  ModelFamily family_;
  std::vector<MemorizedLabel> table_;
};

// Empirical risk minimization within the family. Throws Error{kEmptyInput}
// for a Memorizer on an empty sample.
FittedModel train(ModelFamily family, const LabeledSample& sample);

// 0-1 costs: element i is 1 when the prediction at x_i differs from y_i.
CostVector cost_vector(const FittedModel& model, const LabeledSample& sample);

// Exact expected 0-1 cost of a fixed model under the joint. Throws
// Error{kDomainError} if a memorized x lies outside the joint's domain.
double exact_expectation(const FittedModel& model, const DiscreteJoint& joint);

// Total probability of the x values the model has memorized.
double memorized_mass(const FittedModel& model, const DiscreteJoint& joint);

struct SimulationSpec {
  DiscreteJoint joint = DiscreteJoint::uniform(10, 0.0);
  ModelFamily model = ModelFamily::kConstantZero;
  std::uint64_t m = 100;
  std::uint64_t m_prime = 200;
  std::uint64_t k = 1;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  // Worker threads; 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
  // Draws used by the mean-margin oracle.
  std::uint64_t oracle_draws = 100000;

  // Throws Error{kDomainError} if any size or count is zero.
  void validate() const;
};

// 3 sqrt(b (1 - min(b,1)) / trials): a three-sigma allowance for Monte Carlo
// noise around a frequency whose true value is at most b.
double monte_carlo_slack(double bound, std::uint64_t trials);

struct ValidationRecord {
  BoundKind kind = BoundKind::kFixedModel;
  ModelFamily family = ModelFamily::kConstantZero;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t m = 0;
  std::uint64_t m_prime = 0;
  std::uint64_t k = 0;
  std::uint64_t trials = 0;
  std::uint64_t violations = 0;
  double violation_frequency = 0.0;
  double bound = 0.0;
  double slack = 0.0;
  bool pass = false;

  // kOverfitTest: mean of holdout minus training risk, and the fraction of
  // trials in which the eps/2 null actually held for the trained model.
  std::optional<double> mean_signed_gap;
  std::optional<double> null_held_frequency;
  // kMarginEstimate: confidence parameter, required m', oracle mean margin,
  // and how many trials broke the estimator's triangle inequality (must be 0).
  std::optional<double> delta;
  std::optional<std::uint64_t> required_m_prime;
  std::optional<double> oracle_mean_margin;
  std::optional<std::uint64_t> chain_failures;
};

// Frequency of the event each bound controls:
//   kFixedModel:     |E(y) - e_S'(y)| > eps for a model fitted on S, then S'.
//   kOverfitTest:    run_test flags, i.e. |e_S(y) - e_S'(y)| > eps.
//   kMarginEstimate: |estimate - mu| > eps over k models sharing one S'.
// pass <=> frequency <= bound + monte_carlo_slack(bound, trials).
// kMarginEstimate throws Error{kInfeasible} unless
// m' >= min_holdout_size(k, eps, delta).
ValidationRecord validate_bound(const SimulationSpec& spec, BoundKind kind,
                                double epsilon, double delta = 0.05);

// Brute-force mean overfitting margin: average of |e_S(y_S) - E(y_S)| over
// spec.oracle_draws independent training sets of size spec.m.
double oracle_mean_margin(const SimulationSpec& spec);

struct PowerRecord {
  ModelFamily family = ModelFamily::kMemorizer;
  double epsilon = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t rejections = 0;
  double rejection_frequency = 0.0;
  double mean_signed_gap = 0.0;
  double mean_train_risk = 0.0;
  double mean_holdout_risk = 0.0;
  double mean_true_expectation = 0.0;
  double mean_memorized_mass = 0.0;
};

// How often run_test rejects the null for the spec's model family.
PowerRecord detection_power(const SimulationSpec& spec, double epsilon);

struct InSampleGapRecord {
  ModelFamily family = ModelFamily::kMemorizer;
  double epsilon = 0.0;
  std::uint64_t trials = 0;
  double exceed_frequency = 0.0;
  // 2 exp(-2 eps^2 m); only a valid guarantee when bound_applies.
  double reference_bound = 0.0;
  bool bound_applies = false;
};

// Frequency of |e_S(y_S) - E(y_S)| > eps, measured on the training set the
// model was fitted to.
InSampleGapRecord in_sample_gap(const SimulationSpec& spec, double epsilon);

struct EpochRecord {
  std::uint64_t epoch = 0;
  std::uint64_t memorized_points = 0;
  double train_risk = 0.0;
  double holdout_risk = 0.0;
  double margin = 0.0;
  double signed_gap = 0.0;
  bool flagged = false;
};

struct EpochCurve {
  double epsilon = 0.0;
  double bound = 0.0;
  // epochs + 1 rows: row t has memorized the first floor(t m / epochs)
  // training points. Row 0 is the empty table.
  std::vector<EpochRecord> records;
};

// Training curve of an incrementally grown Memorizer on one fixed training
// set and one fixed holdout set. Risks are measured on the full training
// set. A point, once memorized, predicts the majority label of its x over
// the full training set, so the training risk never increases. For
// sample-independent families every row is the same.
EpochCurve epoch_curve(const SimulationSpec& spec, std::uint64_t epochs,
                       double epsilon);

}  // namespace overfit

#endif  // OVERFIT_SIMULATION_H_
