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
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "overfit/error.h"
#include "test_util.h"

namespace overfit {
namespace {

using testing::error_kind;

TEST(EmpiricalRisk, AllZero) { EXPECT_EQ(empirical_risk({0, 0, 0}), 0.0); }

TEST(EmpiricalRisk, AllOne) { EXPECT_EQ(empirical_risk({1, 1, 1, 1}), 1.0); }

TEST(EmpiricalRisk, ArithmeticMean) {
  EXPECT_NEAR(empirical_risk({0.2, 0.4, 0.9}), 0.5, 1e-15);
}

TEST(CostVector, RejectsEmpty) {
  EXPECT_EQ(error_kind([] { CostVector(std::vector<double>{}); }),
            ErrorKind::kEmptyInput);
}

TEST(CostVector, RejectsOutOfRangeWithIndex) {
  try {
    CostVector({0.5, 0.2, 1.0000000001});
    FAIL() << "accepted 1.0000000001";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kOutOfRange);
    EXPECT_NE(std::string(e.what()).find("index 2"), std::string::npos) << e.what();
  }
  EXPECT_EQ(error_kind([] { CostVector({-0.0001}); }), ErrorKind::kOutOfRange);
  EXPECT_EQ(error_kind([] { CostVector({std::nan("")}); }), ErrorKind::kOutOfRange);
}

TEST(CostVector, AcceptsClosedInterval) {
  const CostVector costs({0.0, 1.0});
  EXPECT_EQ(costs.size(), 2u);
}

TEST(Clip, ExplicitOptIn) {
  const std::vector<double> raw = {-0.1, 0.5, 1.0000000001};
  const CostVector costs(clip(raw));
  EXPECT_EQ(costs[0], 0.0);
  EXPECT_EQ(costs[1], 0.5);
  EXPECT_EQ(costs[2], 1.0);
  EXPECT_EQ(error_kind([&] { clip(raw, 1.0, 0.0); }), ErrorKind::kDomainError);
}

TEST(EmpiricalOverfittingMargin, EqualRisks) {
  EXPECT_EQ(empirical_overfitting_margin({0.5, 0.5}, {0.5, 0.5, 0.5}), 0.0);
}

TEST(EmpiricalOverfittingMargin, ExactArithmetic) {
  EXPECT_NEAR(empirical_overfitting_margin({0, 0, 0, 0}, {0.3, 0.3, 0.3}), 0.3,
              1e-15);
}

TEST(EmpiricalOverfittingMargin, ConstantVectors) {
  const CostVector train(std::vector<double>(50, 0.02));
  const CostVector holdout(std::vector<double>(100, 0.31));
  EXPECT_NEAR(empirical_overfitting_margin(train, holdout), 0.29, 1e-14);
}

TEST(TrueOverfittingMargin, Examples) {
  EXPECT_NEAR(true_overfitting_margin({0.4, 0.6}, 0.5), 0.0, 1e-15);
  EXPECT_NEAR(true_overfitting_margin({0, 0, 0}, 0.3), 0.3, 1e-15);
  EXPECT_NEAR(true_overfitting_margin({1.0}, 0.25), 0.75, 1e-15);
}

TEST(TrueOverfittingMargin, RejectsBadExpectation) {
  EXPECT_EQ(error_kind([] { true_overfitting_margin({0.5}, 1.5); }),
            ErrorKind::kOutOfRange);
  EXPECT_EQ(error_kind([] { true_overfitting_margin({0.5}, -0.1); }),
            ErrorKind::kOutOfRange);
}

TEST(RiskSummary, SignedGapDirection) {
  const RiskSummary s = summarize({0.0, 0.0}, {0.4, 0.2});
  EXPECT_EQ(s.train_size, 2u);
  EXPECT_EQ(s.holdout_size, 2u);
  EXPECT_NEAR(s.signed_gap(), 0.3, 1e-15);
}

std::vector<double> random_costs(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(1, 500);
  std::uniform_real_distribution<double> value(0.0, 1.0);
  std::bernoulli_distribution endpoint(0.1);
  std::vector<double> v(len(rng));
  for (double& x : v) x = endpoint(rng) ? (endpoint(rng) ? 1.0 : 0.0) : value(rng);
  return v;
}

// Long double naive sum as an independent reference.
double reference_mean(const std::vector<double>& v) {
  long double sum = 0;
  for (double x : v) sum += x;
  return static_cast<double>(sum / v.size());
}

TEST(EmpiricalRiskProperty, PermutationConcatenationAndRange) {
  std::mt19937_64 rng(20261016);
  for (int iter = 0; iter < 1000; ++iter) {
    std::vector<double> a = random_costs(rng);
    const std::vector<double> b = random_costs(rng);
    const double risk_a = empirical_risk(CostVector(a));
    const double risk_b = empirical_risk(CostVector(b));
    ASSERT_GE(risk_a, 0.0);
    ASSERT_LE(risk_a, 1.0);
    ASSERT_NEAR(risk_a, reference_mean(a), 1e-12);

    std::vector<double> shuffled = a;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    ASSERT_NEAR(empirical_risk(CostVector(shuffled)), risk_a, 1e-12);

    std::vector<double> joined = a;
    joined.insert(joined.end(), b.begin(), b.end());
    const double weighted =
        (risk_a * a.size() + risk_b * b.size()) / (a.size() + b.size());
    ASSERT_NEAR(empirical_risk(CostVector(joined)), weighted, 1e-12);

    const CostVector ca(a);
    const CostVector cb(b);
    ASSERT_EQ(empirical_overfitting_margin(ca, cb),
              empirical_overfitting_margin(cb, ca));
    ASSERT_EQ(empirical_overfitting_margin(ca, ca), 0.0);
    const double margin = empirical_overfitting_margin(ca, cb);
    ASSERT_GE(margin, 0.0);
    ASSERT_LE(margin, 1.0);
  }
}

}  // namespace
}  // namespace overfit
