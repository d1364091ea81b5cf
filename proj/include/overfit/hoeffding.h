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

// Closed-form two-sided Hoeffding-type tail bounds for means of iid [0,1]
// variables, and the (epsilon, delta, m) solver.
//
// Bounds are returned raw. A value above 1 carries no information ("vacuous")
// but is kept as-is so algebraic identities between the bounds stay exact;
// reporting layers decide whether to clamp. All logarithms are natural.

#ifndef OVERFIT_HOEFFDING_H_
#define OVERFIT_HOEFFDING_H_

#include <cstdint>
#include <optional>
#include <string_view>

namespace overfit {

enum class BoundKind {
  // P(|E - e_S'| > eps) < 2 exp(-2 eps^2 m') for a model fixed before S'.
  kFixedModel,
  // P(|e_S - e_S'| > eps) <= 2 exp(-eps^2 m' / 2) under the eps/2 null.
  kOverfitTest,
  // P(|mean margin estimate - mu| > eps) <= 4 exp(-k eps^2 / 2).
  kMarginEstimate,
};

std::string_view bound_kind_name(BoundKind kind);
// Accepts "fixed-model", "overfit-test", "margin-estimate".
std::optional<BoundKind> parse_bound_kind(std::string_view name);

struct ProbabilityBound {
  BoundKind kind;
  double value;

  bool vacuous() const { return value > 1.0; }
};

inline bool is_vacuous(double bound) { return bound > 1.0; }

// All bound functions throw Error{kDomainError} unless epsilon is in (0,1)
// and the sample count is at least 1.
double fixed_model_bound(double epsilon, std::uint64_t m_prime);
double overfit_test_bound(double epsilon, std::uint64_t m_prime);
double margin_estimate_bound(double epsilon, std::uint64_t k);

// Dispatches on kind; `count` is m' for the first two kinds and k for the
// margin estimate.
ProbabilityBound evaluate_bound(BoundKind kind, double epsilon,
                                std::uint64_t count);

// Smallest integer m' with m' > k + 2 ln(k / delta) / epsilon^2.
// epsilon and delta must be in (0,1), k >= 1.
std::uint64_t min_holdout_size(std::uint64_t k, double epsilon, double delta);

enum class HoeffdingUnknown { kEpsilon, kDelta, kM };

std::string_view hoeffding_unknown_name(HoeffdingUnknown unknown);

// Two of the three quantities in delta = 2 exp(-2 epsilon^2 m), with the
// third left unset. delta may instead be given as its natural logarithm,
// which keeps values far below the smallest double representable.
struct HoeffdingQuery {
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::optional<std::uint64_t> m;
  std::optional<double> log_delta;

  // Throws Error{kDomainError} unless exactly one quantity is unset and the
  // set ones are in range: epsilon in (0,1), m >= 1, delta in (0,2), log_delta
  // finite. Setting both delta and log_delta is a domain error. A delta of 2
  // or more (log_delta >= ln 2) is Error{kInfeasible}.
  HoeffdingUnknown unknown() const;
};

struct HoeffdingSolution {
  double epsilon;
  double delta;
  std::uint64_t m;
  HoeffdingUnknown solved_for;
  // ln(delta), exact even where delta underflows to 0.
  double log_delta;

  bool vacuous() const { return delta >= 1.0; }
};

// Completes the triple. Solving for delta is exact evaluation; solving for m
// returns the smallest m with 2 exp(-2 eps^2 m) <= delta; solving for epsilon
// returns sqrt(ln(2/delta) / (2m)) and throws Error{kInfeasible} when that
// is not below 1.
HoeffdingSolution solve_hoeffding(const HoeffdingQuery& query);

}  // namespace overfit

#endif  // OVERFIT_HOEFFDING_H_
