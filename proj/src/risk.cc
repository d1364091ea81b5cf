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

#include "overfit/risk.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "overfit/error.h"

namespace overfit {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kEmptyInput:
      return "EmptyInput";
    case ErrorKind::kOutOfRange:
      return "OutOfRange";
    case ErrorKind::kDomainError:
      return "DomainError";
    case ErrorKind::kInfeasible:
      return "Infeasible";
    case ErrorKind::kNotFlagged:
      return "NotFlagged";
    case ErrorKind::kRaggedRuns:
      return "RaggedRuns";
    case ErrorKind::kLengthMismatch:
      return "LengthMismatch";
    case ErrorKind::kParseError:
      return "ParseError";
  }
  return "Unknown";
}

CostVector::CostVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) {
    throw Error(ErrorKind::kEmptyInput, "cost vector has no samples");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    // Written so that NaN fails the check.
    if (!(v >= 0.0 && v <= 1.0)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "cost at index " << i << " is " << v << ", outside [0,1]";
      throw Error(ErrorKind::kOutOfRange, msg.str());
    }
  }
}

std::vector<double> clip(std::span<const double> values, double lo, double hi) {
  if (!(lo <= hi)) {
    throw Error(ErrorKind::kDomainError, "clip requires lo <= hi");
  }
  std::vector<double> out(values.begin(), values.end());
  for (double& v : out) v = std::clamp(v, lo, hi);
  return out;
}

double compensated_sum(std::span<const double> values) {
  double sum = 0.0;
  double compensation = 0.0;
  for (const double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      compensation += (sum - t) + v;
    } else {
      compensation += (v - t) + sum;
    }
    sum = t;
  }
  return sum + compensation;
}

double empirical_risk(const CostVector& costs) {
  const double mean =
      compensated_sum(costs.values()) / static_cast<double>(costs.size());
  // The compensated mean of values in [0,1] can only leave the interval by
  // one ulp of rounding; keep the postcondition exact.
  return std::clamp(mean, 0.0, 1.0);
}

RiskSummary summarize(const CostVector& train, const CostVector& holdout) {
  return RiskSummary{empirical_risk(train), empirical_risk(holdout),
                     train.size(), holdout.size()};
}

double empirical_overfitting_margin(const CostVector& train,
                                    const CostVector& holdout) {
  return std::abs(empirical_risk(train) - empirical_risk(holdout));
}

double true_overfitting_margin(const CostVector& train,
                               double true_expectation) {
  if (!(true_expectation >= 0.0 && true_expectation <= 1.0)) {
    std::ostringstream msg;
    msg << "true expectation " << true_expectation << " is outside [0,1]";
    throw Error(ErrorKind::kOutOfRange, msg.str());
  }
  return std::abs(empirical_risk(train) - true_expectation);
}

}  // namespace overfit
