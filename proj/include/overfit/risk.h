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

// Per-sample cost vectors and the risk/margin statistics computed from them.
//
// A cost vector holds already-evaluated costs c(z_i) of one fixed model on one
// dataset. Every value must lie in the closed interval [0,1]; the Hoeffding
// bounds used elsewhere in the library are only valid under that assumption,
// so out-of-range values are rejected rather than clipped. Callers whose
// upstream arithmetic produces values like 1.0000000001 must call clip()
// explicitly.

#ifndef OVERFIT_RISK_H_
#define OVERFIT_RISK_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace overfit {

class CostVector {
 public:
  // Throws Error{kEmptyInput} on an empty input and Error{kOutOfRange} naming
  // the first offending index when a value is outside [0,1] (NaN included).
  explicit CostVector(std::vector<double> values);
  CostVector(std::initializer_list<double> values)
      : CostVector(std::vector<double>(values)) {}

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  friend bool operator==(const CostVector&, const CostVector&) = default;

 private:
  std::vector<double> values_;
};

// Opt-in preprocessing: clamps every value into [lo, hi]. Requires lo <= hi.
std::vector<double> clip(std::span<const double> values, double lo = 0.0,
                         double hi = 1.0);

// Neumaier-compensated sum. Exposed for reuse by the margin estimator.
double compensated_sum(std::span<const double> values);

// Arithmetic mean of the costs.
double empirical_risk(const CostVector& costs);

struct RiskSummary {
  double train_risk = 0.0;
  double holdout_risk = 0.0;
  std::size_t train_size = 0;
  std::size_t holdout_size = 0;

  // holdout_risk - train_risk; positive in the overfitting direction.
  double signed_gap() const { return holdout_risk - train_risk; }
};

RiskSummary summarize(const CostVector& train, const CostVector& holdout);

// |e_S - e_S'| for one fixed model evaluated on its training set and on a
// holdout set. The caller guarantees both vectors come from the same model.
double empirical_overfitting_margin(const CostVector& train,
                                    const CostVector& holdout);

// |e_S - E|, where the expected cost E comes from an oracle.
double true_overfitting_margin(const CostVector& train,
                               double true_expectation);

}  // namespace overfit

#endif  // OVERFIT_RISK_H_
