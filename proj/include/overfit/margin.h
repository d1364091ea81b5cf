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

// Estimating a hypothesis class's mean overfitting margin mu from k models,
// each trained on its own iid training set and all evaluated on one shared
// holdout set S'.
//
// The estimate is (1/k) sum_j |e_{S_j}(y_j) - e_{S'}(y_j)|. When
// m' > k + 2 ln(k/delta) / eps^2,
//
//   P(|estimate - mu| > eps) <= 4 exp(-k eps^2 / 2).
//
// mu itself needs the true distribution and is never computed here; callers
// with an oracle pass true expectations to decompose_margin_error().

#ifndef OVERFIT_MARGIN_H_
#define OVERFIT_MARGIN_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "overfit/risk.h"

namespace overfit {

struct MarginRun {
  CostVector train_costs;
  CostVector holdout_costs;
};

// k runs with a common training size m and a common holdout size m'.
class MarginRunSet {
 public:
  // Throws Error{kEmptyInput} for k = 0 and Error{kRaggedRuns} listing every
  // run whose lengths differ from the first run's.
  explicit MarginRunSet(std::vector<MarginRun> runs);

  std::span<const MarginRun> runs() const noexcept { return runs_; }
  std::size_t k() const noexcept { return runs_.size(); }
  std::size_t m() const noexcept { return runs_.front().train_costs.size(); }
  std::size_t m_prime() const noexcept {
    return runs_.front().holdout_costs.size();
  }

 private:
  std::vector<MarginRun> runs_;
};

struct MarginEstimate {
  double estimate = 0.0;
  double epsilon = 0.0;
  double delta = 0.0;
  std::size_t k = 0;
  std::size_t m = 0;
  std::size_t m_prime = 0;
  double bound = 0.0;
  bool hypothesis_satisfied = false;
  std::uint64_t required_m_prime = 0;
  // Non-fatal conditions, e.g. "HypothesisUnmet".
  std::vector<std::string> warnings;

  bool vacuous() const { return bound > 1.0; }
};

// Per-run empirical margins |e_{S_j} - e_{S'}|, in run order.
std::vector<double> run_margins(const MarginRunSet& runs);

// Never fails on an unmet sample-size hypothesis; that is reported through
// hypothesis_satisfied and a "HypothesisUnmet" warning instead.
MarginEstimate estimate_mean_margin(const MarginRunSet& runs, double epsilon,
                                    double delta);

struct MarginRunTerms {
  // |e_{S'}(y_j) - E(y_j)|
  double holdout_deviation;
  // |E(y_j) - e_{S_j}(y_j)|
  double overfitting_margin;
};

// Splits the estimator's error by adding and subtracting each model's true
// expectation, then checks the resulting triangle inequality
//
//   |estimate - mean_j margin_j| <= mean_j holdout_deviation_j.
struct MarginDecomposition {
  std::vector<MarginRunTerms> terms;
  double estimate = 0.0;
  double mean_holdout_deviation = 0.0;
  double mean_overfitting_margin = 0.0;
  // |estimate - mean_overfitting_margin|
  double estimator_gap = 0.0;
  bool chain_holds = false;
};

inline constexpr double kChainSlack = 1e-12;

// Throws Error{kLengthMismatch} unless there is one expectation per run and
// Error{kOutOfRange} if any expectation is outside [0,1].
MarginDecomposition decompose_margin_error(
    const MarginRunSet& runs, std::span<const double> true_expectations);

}  // namespace overfit

#endif  // OVERFIT_MARGIN_H_
