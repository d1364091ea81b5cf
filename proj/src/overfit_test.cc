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

#include "overfit/overfit_test.h"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "overfit/error.h"
#include "overfit/hoeffding.h"

namespace overfit {
namespace {

std::string format_general(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2g", value);
  return buf;
}

}  // namespace

void TestConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw Error(ErrorKind::kDomainError, "epsilon must lie in (0,1)");
  }
  if (significance_alpha &&
      !(*significance_alpha > 0.0 && *significance_alpha < 1.0)) {
    throw Error(ErrorKind::kDomainError, "alpha must lie in (0,1)");
  }
  if (probe_range) {
    const auto [lo, hi] = *probe_range;
    if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) {
      throw Error(ErrorKind::kDomainError,
                  "probe range requires finite lo < hi");
    }
  }
}

std::string_view decision_name(Decision decision) {
  return decision == Decision::kNullRejected ? "NullRejected" : "NullRetained";
}

std::string_view interpretation_kind_name(InterpretationKind kind) {
  switch (kind) {
    case InterpretationKind::kUnluckySample:
      return "UnluckySample";
    case InterpretationKind::kOverfitting:
      return "Overfitting";
    case InterpretationKind::kDistributionShift:
      return "DistributionShift";
  }
  return "Unknown";
}

CostVector rescale_probe(std::span<const double> values, const ProbeRange& range) {
  const double width = range.hi - range.lo;
  std::vector<double> scaled;
  scaled.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (!(v >= range.lo && v <= range.hi)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "probe value at index " << i << " is " << v
          << ", outside declared range [" << range.lo << "," << range.hi << "]";
      throw Error(ErrorKind::kOutOfRange, msg.str());
    }
    scaled.push_back((v - range.lo) / width);
  }
  return CostVector(std::move(scaled));
}

TestReport run_test(const CostVector& train, const CostVector& holdout,
                    const TestConfig& config) {
  config.validate();
  TestReport report;
  report.risks = summarize(train, holdout);
  report.signed_gap = report.risks.signed_gap();
  report.margin = std::abs(report.signed_gap);
  report.epsilon = config.epsilon;
  report.significance_alpha = config.significance_alpha;
  report.bound = overfit_test_bound(config.epsilon, holdout.size());
  report.flagged = report.margin > config.epsilon;

  bool reject = report.flagged;
  if (config.significance_alpha) {
    reject = reject && report.bound <= *config.significance_alpha;
  }
  report.decision = reject ? Decision::kNullRejected : Decision::kNullRetained;
  if (report.flagged) report.interpretations = interpret_flag(report);
  return report;
}

TestReport run_test(std::span<const double> train,
                    std::span<const double> holdout, const TestConfig& config) {
  config.validate();
  if (config.probe_range) {
    return run_test(rescale_probe(train, *config.probe_range),
                    rescale_probe(holdout, *config.probe_range), config);
  }
  return run_test(CostVector({train.begin(), train.end()}),
                  CostVector({holdout.begin(), holdout.end()}), config);
}

std::vector<Interpretation> interpret_flag(const TestReport& report) {
  if (!report.flagged) {
    throw Error(ErrorKind::kNotFlagged,
                "interpretations only apply to a flagged report");
  }
  const std::string eps = format_general(report.epsilon);
  const std::string half_eps = format_general(report.null_precision());

  std::string unlucky =
      "The model generalizes and the holdout is iid from the training "
      "distribution, but this holdout draw is a rare one; probability <= " +
      format_general(report.bound);
  if (report.vacuous()) {
    unlucky += " (bound exceeds 1 and is vacuous: this reading cannot be "
               "ruled out at this holdout size)";
  }
  return {
      {InterpretationKind::kUnluckySample, std::move(unlucky)},
      {InterpretationKind::kOverfitting,
       "The model does not generalize: its training risk is not within " +
           half_eps + " of its expected risk, so the observed gap exceeds " +
           eps + " (overfitting)."},
      {InterpretationKind::kDistributionShift,
       "The holdout data was not drawn iid from the training distribution "
       "(possible distribution shift). The test cannot distinguish this "
       "from overfitting."},
  };
}

}  // namespace overfit
