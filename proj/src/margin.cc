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

#include "overfit/margin.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "overfit/error.h"
#include "overfit/hoeffding.h"

namespace overfit {
namespace {

// Sorting first makes the result independent of run order bit for bit.
double order_free_mean(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const double mean =
      compensated_sum(values) / static_cast<double>(values.size());
  return std::clamp(mean, 0.0, 1.0);
}

}  // namespace

MarginRunSet::MarginRunSet(std::vector<MarginRun> runs) : runs_(std::move(runs)) {
  if (runs_.empty()) {
    throw Error(ErrorKind::kEmptyInput, "run set has no runs");
  }
  const std::size_t m = runs_.front().train_costs.size();
  const std::size_t m_prime = runs_.front().holdout_costs.size();
  std::ostringstream msg;
  bool ragged = false;
  for (std::size_t j = 1; j < runs_.size(); ++j) {
    const std::size_t train = runs_[j].train_costs.size();
    const std::size_t holdout = runs_[j].holdout_costs.size();
    if (train != m) {
      msg << (ragged ? "; " : "") << "run " << j << ": train length " << train
          << " != " << m;
      ragged = true;
    }
    if (holdout != m_prime) {
      msg << (ragged ? "; " : "") << "run " << j << ": holdout length "
          << holdout << " != " << m_prime;
      ragged = true;
    }
  }
  if (ragged) throw Error(ErrorKind::kRaggedRuns, msg.str());
}

std::vector<double> run_margins(const MarginRunSet& runs) {
  std::vector<double> margins;
  margins.reserve(runs.k());
  for (const MarginRun& run : runs.runs()) {
    margins.push_back(
        empirical_overfitting_margin(run.train_costs, run.holdout_costs));
  }
  return margins;
}

MarginEstimate estimate_mean_margin(const MarginRunSet& runs, double epsilon,
                                    double delta) {
  MarginEstimate out;
  out.epsilon = epsilon;
  out.delta = delta;
  out.k = runs.k();
  out.m = runs.m();
  out.m_prime = runs.m_prime();
  // Both validate epsilon/delta and throw DomainError first.
  out.bound = margin_estimate_bound(epsilon, out.k);
  out.required_m_prime = min_holdout_size(out.k, epsilon, delta);
  out.hypothesis_satisfied = out.m_prime >= out.required_m_prime;
  if (!out.hypothesis_satisfied) out.warnings.emplace_back("HypothesisUnmet");

  out.estimate = order_free_mean(run_margins(runs));
  return out;
}

MarginDecomposition decompose_margin_error(
    const MarginRunSet& runs, std::span<const double> true_expectations) {
  if (true_expectations.size() != runs.k()) {
    std::ostringstream msg;
    msg << "expected " << runs.k() << " true expectations, got "
        << true_expectations.size();
    throw Error(ErrorKind::kLengthMismatch, msg.str());
  }
  MarginDecomposition out;
  out.terms.reserve(runs.k());
  std::vector<double> margins;
  std::vector<double> deviations;
  std::vector<double> true_margins;
  for (std::size_t j = 0; j < runs.k(); ++j) {
    const MarginRun& run = runs.runs()[j];
    const double expectation = true_expectations[j];
    if (!(expectation >= 0.0 && expectation <= 1.0)) {
      std::ostringstream msg;
      msg << "true expectation for run " << j << " is " << expectation
          << ", outside [0,1]";
      throw Error(ErrorKind::kOutOfRange, msg.str());
    }
    const double holdout_risk = empirical_risk(run.holdout_costs);
    MarginRunTerms terms{std::abs(holdout_risk - expectation),
                         true_overfitting_margin(run.train_costs, expectation)};
    out.terms.push_back(terms);
    deviations.push_back(terms.holdout_deviation);
    true_margins.push_back(terms.overfitting_margin);
    margins.push_back(
        empirical_overfitting_margin(run.train_costs, run.holdout_costs));
  }
  out.estimate = order_free_mean(margins);
  out.mean_holdout_deviation = order_free_mean(deviations);
  out.mean_overfitting_margin = order_free_mean(true_margins);
  out.estimator_gap = std::abs(out.estimate - out.mean_overfitting_margin);
  out.chain_holds = out.estimator_gap <= out.mean_holdout_deviation + kChainSlack;
  return out;
}

}  // namespace overfit
