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

#include "overfit/hoeffding.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "overfit/error.h"

namespace overfit {
namespace {

// Above this, integer sample sizes stop being exactly representable in a
// double and the rounding guarantees below no longer hold.
constexpr double kMaxSampleSize = 9007199254740992.0;  // 2^53
constexpr double kLn2 = 0.69314718055994530942;

void check_open_unit(double value, const char* name) {
  if (!(value > 0.0 && value < 1.0)) {
    std::ostringstream msg;
    msg << name << " = " << value << " must lie in (0,1)";
    throw Error(ErrorKind::kDomainError, msg.str());
  }
}

void check_count(std::uint64_t count, const char* name) {
  if (count < 1) {
    throw Error(ErrorKind::kDomainError,
                std::string(name) + " must be a positive integer");
  }
}

double hoeffding_delta(double epsilon, std::uint64_t m) {
  return 2.0 * std::exp(-2.0 * epsilon * epsilon * static_cast<double>(m));
}

double hoeffding_log_delta(double epsilon, std::uint64_t m) {
  return kLn2 - 2.0 * epsilon * epsilon * static_cast<double>(m);
}

}  // namespace

std::string_view bound_kind_name(BoundKind kind) {
  switch (kind) {
    case BoundKind::kFixedModel:
      return "fixed-model";
    case BoundKind::kOverfitTest:
      return "overfit-test";
    case BoundKind::kMarginEstimate:
      return "margin-estimate";
  }
  return "unknown";
}

std::optional<BoundKind> parse_bound_kind(std::string_view name) {
  for (BoundKind kind : {BoundKind::kFixedModel, BoundKind::kOverfitTest,
                         BoundKind::kMarginEstimate}) {
    if (bound_kind_name(kind) == name) return kind;
  }
  return std::nullopt;
}

double fixed_model_bound(double epsilon, std::uint64_t m_prime) {
  check_open_unit(epsilon, "epsilon");
  check_count(m_prime, "m_prime");
  return hoeffding_delta(epsilon, m_prime);
}

double overfit_test_bound(double epsilon, std::uint64_t m_prime) {
  check_open_unit(epsilon, "epsilon");
  check_count(m_prime, "m_prime");
  return 2.0 * std::exp(-epsilon * epsilon * static_cast<double>(m_prime) / 2.0);
}

double margin_estimate_bound(double epsilon, std::uint64_t k) {
  check_open_unit(epsilon, "epsilon");
  check_count(k, "k");
  return 4.0 * std::exp(-static_cast<double>(k) * epsilon * epsilon / 2.0);
}

ProbabilityBound evaluate_bound(BoundKind kind, double epsilon,
                                std::uint64_t count) {
  switch (kind) {
    case BoundKind::kFixedModel:
      return {kind, fixed_model_bound(epsilon, count)};
    case BoundKind::kOverfitTest:
      return {kind, overfit_test_bound(epsilon, count)};
    case BoundKind::kMarginEstimate:
      return {kind, margin_estimate_bound(epsilon, count)};
  }
  throw Error(ErrorKind::kDomainError, "unknown bound kind");
}

std::uint64_t min_holdout_size(std::uint64_t k, double epsilon, double delta) {
  check_count(k, "k");
  check_open_unit(epsilon, "epsilon");
  check_open_unit(delta, "delta");
  const double kd = static_cast<double>(k);
  const double threshold = kd + 2.0 * std::log(kd / delta) / (epsilon * epsilon);
  if (!(threshold < kMaxSampleSize)) {
    throw Error(ErrorKind::kInfeasible, "required holdout size overflows");
  }
  // Strict inequality: an integral threshold is itself not enough.
  return static_cast<std::uint64_t>(std::floor(threshold)) + 1;
}

std::string_view hoeffding_unknown_name(HoeffdingUnknown unknown) {
  switch (unknown) {
    case HoeffdingUnknown::kEpsilon:
      return "epsilon";
    case HoeffdingUnknown::kDelta:
      return "delta";
    case HoeffdingUnknown::kM:
      return "m";
  }
  return "unknown";
}

HoeffdingUnknown HoeffdingQuery::unknown() const {
  if (delta && log_delta) {
    throw Error(ErrorKind::kDomainError, "give delta or log_delta, not both");
  }
  const bool has_delta = delta.has_value() || log_delta.has_value();
  const int unset = !epsilon.has_value() + !has_delta + !m.has_value();
  if (unset != 1) {
    throw Error(ErrorKind::kDomainError,
                "exactly two of epsilon, delta, m must be given (got " +
                    std::to_string(3 - unset) + ")");
  }
  if (epsilon) check_open_unit(*epsilon, "epsilon");
  if (m) check_count(*m, "m");
  if (delta) {
    if (!(*delta > 0.0)) {
      throw Error(ErrorKind::kDomainError, "delta must be positive");
    }
    if (*delta >= 2.0) {
      throw Error(ErrorKind::kInfeasible,
                  "delta >= 2 is satisfied by every sample size");
    }
  }
  if (log_delta) {
    if (!std::isfinite(*log_delta)) {
      throw Error(ErrorKind::kDomainError, "log_delta must be finite");
    }
    if (*log_delta >= kLn2) {
      throw Error(ErrorKind::kInfeasible,
                  "delta >= 2 is satisfied by every sample size");
    }
  }
  if (!epsilon) return HoeffdingUnknown::kEpsilon;
  if (!has_delta) return HoeffdingUnknown::kDelta;
  return HoeffdingUnknown::kM;
}

HoeffdingSolution solve_hoeffding(const HoeffdingQuery& query) {
  const HoeffdingUnknown unknown = query.unknown();
  switch (unknown) {
    case HoeffdingUnknown::kDelta: {
      const double epsilon = *query.epsilon;
      const std::uint64_t m = *query.m;
      return {epsilon, hoeffding_delta(epsilon, m), m, unknown,
              hoeffding_log_delta(epsilon, m)};
    }
    case HoeffdingUnknown::kEpsilon: {
      const double m = static_cast<double>(*query.m);
      // ln(2 / delta), taken from whichever form of delta was given.
      const double log_ratio =
          query.delta ? std::log(2.0 / *query.delta) : kLn2 - *query.log_delta;
      const double epsilon = std::sqrt(log_ratio / (2.0 * m));
      if (!(epsilon < 1.0)) {
        std::ostringstream msg;
        msg << "solved epsilon " << epsilon << " is not below 1";
        throw Error(ErrorKind::kInfeasible, msg.str());
      }
      const double log_delta = query.delta ? std::log(*query.delta) : *query.log_delta;
      return {epsilon, query.delta ? *query.delta : std::exp(log_delta), *query.m,
              unknown, log_delta};
    }
    case HoeffdingUnknown::kM: {
      const double epsilon = *query.epsilon;
      const double log_delta = query.delta ? std::log(*query.delta) : *query.log_delta;
      const double real_m = (kLn2 - log_delta) / (2.0 * epsilon * epsilon);
      if (!(real_m < kMaxSampleSize)) {
        throw Error(ErrorKind::kInfeasible, "required sample size overflows");
      }
      auto m = static_cast<std::uint64_t>(std::max(1.0, std::ceil(real_m)));
      // The closed form can land one off after rounding; settle on the
      // smallest m that actually meets delta.
      const auto exceeds = [&](std::uint64_t size) {
        return query.delta ? hoeffding_delta(epsilon, size) > *query.delta
                           : hoeffding_log_delta(epsilon, size) > log_delta;
      };
      while (exceeds(m)) ++m;
      while (m > 1 && !exceeds(m - 1)) --m;
      return {epsilon, query.delta ? *query.delta : std::exp(log_delta), m, unknown,
              log_delta};
    }
  }
  throw Error(ErrorKind::kDomainError, "unreachable");
}

}  // namespace overfit
