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

#include "overfit/simulation.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>
#include <utility>

#include "overfit/error.h"
#include "overfit/margin.h"
#include "overfit/overfit_test.h"

namespace overfit {
namespace {

// Stream ids below 2^62 belong to trials; the others are reserved.
constexpr std::uint64_t kEpochStream = std::uint64_t{1} << 62;
constexpr std::uint64_t kOracleStreamBase = std::uint64_t{1} << 63;

// Evaluates fn(t) for t in [0, trials) on a pool of threads and returns the
// outcomes in trial order. Each trial owns its own random stream, so the
// result does not depend on how trials are scheduled.
template <typename Outcome, typename Fn>
std::vector<Outcome> run_trials(std::uint64_t trials, unsigned threads, Fn fn) {
  std::vector<Outcome> outcomes(trials);
  unsigned workers = threads != 0 ? threads : std::thread::hardware_concurrency();
  workers = static_cast<unsigned>(
      std::clamp<std::uint64_t>(workers, 1, std::max<std::uint64_t>(trials, 1)));
  if (workers == 1) {
    for (std::uint64_t t = 0; t < trials; ++t) outcomes[t] = fn(t);
    return outcomes;
  }

  constexpr std::uint64_t kChunk = 256;
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&] {
    try {
      for (;;) {
        const std::uint64_t begin = next.fetch_add(kChunk);
        if (begin >= trials) return;
        const std::uint64_t end = std::min(trials, begin + kChunk);
        for (std::uint64_t t = begin; t < end; ++t) outcomes[t] = fn(t);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mu);
      if (!failure) failure = std::current_exception();
      next.store(trials);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (std::thread& thread : pool) thread.join();
  if (failure) std::rethrow_exception(failure);
  return outcomes;
}

double cost_at(int prediction, std::uint32_t x, double eta) {
  // Expected 0-1 cost at x: the label equals parity(x) with prob 1 - eta.
  return prediction == parity(x) ? eta : 1.0 - eta;
}

double frequency(std::uint64_t count, std::uint64_t trials) {
  return static_cast<double>(count) / static_cast<double>(trials);
}

double risk_of(const FittedModel& model, const LabeledSample& sample) {
  return empirical_risk(cost_vector(model, sample));
}

}  // namespace

DiscreteJoint::DiscreteJoint(std::vector<double> x_probs, double eta)
    : probs_(std::move(x_probs)), eta_(eta) {
  if (probs_.empty()) {
    throw Error(ErrorKind::kDomainError, "x domain must be non-empty");
  }
  if (probs_.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorKind::kDomainError, "x domain too large");
  }
  if (!(eta >= 0.0 && eta < 0.5)) {
    throw Error(ErrorKind::kDomainError, "label noise eta must lie in [0, 0.5)");
  }
  for (std::size_t x = 0; x < probs_.size(); ++x) {
    if (!(probs_[x] >= 0.0) || !std::isfinite(probs_[x])) {
      std::ostringstream msg;
      msg << "probability of x = " << x << " is " << probs_[x];
      throw Error(ErrorKind::kDomainError, msg.str());
    }
  }
  const double total = compensated_sum(probs_);
  if (!(std::abs(total - 1.0) <= 1e-12)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "x probabilities sum to " << total << ", not 1";
    throw Error(ErrorKind::kDomainError, msg.str());
  }

  cdf_.resize(probs_.size());
  std::partial_sum(probs_.begin(), probs_.end(), cdf_.begin());
  // Zero-mass tail entries stay unreachable because upper_bound returns the
  // first entry strictly above u < 1.
  const auto last_positive = std::find_if(probs_.rbegin(), probs_.rend(),
                                          [](double p) { return p > 0.0; });
  const std::size_t tail = probs_.size() - (last_positive - probs_.rbegin()) - 1;
  std::fill(cdf_.begin() + static_cast<std::ptrdiff_t>(tail), cdf_.end(), 1.0);

  std::vector<double> odd;
  for (std::size_t x = 1; x < probs_.size(); x += 2) odd.push_back(probs_[x]);
  parity_one_mass_ = odd.empty() ? 0.0 : compensated_sum(odd);
  uniform_ = std::all_of(probs_.begin(), probs_.end(),
                         [&](double p) { return p == probs_.front(); });
}

DiscreteJoint DiscreteJoint::uniform(std::uint32_t n, double eta) {
  if (n == 0) throw Error(ErrorKind::kDomainError, "x domain must be non-empty");
  return DiscreteJoint(std::vector<double>(n, 1.0 / n), eta);
}

DiscreteJoint DiscreteJoint::point_mass(std::uint32_t n, std::uint32_t x,
                                        double eta) {
  if (x >= n) throw Error(ErrorKind::kDomainError, "point mass outside domain");
  std::vector<double> probs(n, 0.0);
  probs[x] = 1.0;
  return DiscreteJoint(std::move(probs), eta);
}

std::uint32_t DiscreteJoint::sample_x(RandomStream& stream) const {
  if (uniform_) return static_cast<std::uint32_t>(stream.below(probs_.size()));
  const double u = stream.uniform();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return static_cast<std::uint32_t>(std::min<std::ptrdiff_t>(
      it - cdf_.begin(), static_cast<std::ptrdiff_t>(cdf_.size()) - 1));
}

LabeledSample sample_dataset(const DiscreteJoint& joint, std::size_t size,
                             RandomStream& stream) {
  if (size == 0) throw Error(ErrorKind::kDomainError, "sample size must be >= 1");
  LabeledSample sample;
  sample.x.resize(size);
  sample.y.resize(size);
  for (std::size_t i = 0; i < size; ++i) {
    const std::uint32_t x = joint.sample_x(stream);
    const bool flip = stream.bernoulli(joint.eta());
    sample.x[i] = x;
    sample.y[i] = static_cast<std::uint8_t>(parity(x) ^ static_cast<int>(flip));
  }
  return sample;
}

std::string_view model_family_name(ModelFamily family) {
  switch (family) {
    case ModelFamily::kMemorizer:
      return "memorizer";
    case ModelFamily::kConstantZero:
      return "constant-zero";
    case ModelFamily::kParityOracle:
      return "parity-oracle";
  }
  return "unknown";
}

std::optional<ModelFamily> parse_model_family(std::string_view name) {
  for (ModelFamily family : {ModelFamily::kMemorizer, ModelFamily::kConstantZero,
                             ModelFamily::kParityOracle}) {
    if (model_family_name(family) == name) return family;
  }
  return std::nullopt;
}

bool is_sample_independent(ModelFamily family) {
  return family != ModelFamily::kMemorizer;
}

FittedModel FittedModel::memorize(const LabeledSample& sample) {
  std::vector<std::pair<std::uint32_t, std::uint8_t>> points(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    points[i] = {sample.x[i], sample.y[i]};
  }
  std::sort(points.begin(), points.end());
  std::vector<MemorizedLabel> table;
  for (std::size_t i = 0; i < points.size();) {
    const std::uint32_t x = points[i].first;
    std::size_t ones = 0;
    std::size_t count = 0;
    for (; i < points.size() && points[i].first == x; ++i, ++count) {
      ones += points[i].second;
    }
    table.push_back({x, static_cast<std::uint8_t>(2 * ones > count ? 1 : 0)});
  }
  return FittedModel(ModelFamily::kMemorizer, std::move(table));
}

int FittedModel::predict(std::uint32_t x) const {
  switch (family_) {
    case ModelFamily::kConstantZero:
      return 0;
    case ModelFamily::kParityOracle:
      return parity(x);
    case ModelFamily::kMemorizer: {
      const auto it = std::lower_bound(
          table_.begin(), table_.end(), x,
          [](const MemorizedLabel& entry, std::uint32_t key) { return entry.x < key; });
      return (it != table_.end() && it->x == x) ? it->label : 0;
    }
  }
  return 0;
}

FittedModel train(ModelFamily family, const LabeledSample& sample) {
  switch (family) {
    case ModelFamily::kConstantZero:
      return FittedModel::constant_zero();
    case ModelFamily::kParityOracle:
      return FittedModel::parity_oracle();
    case ModelFamily::kMemorizer:
      if (sample.size() == 0) {
        throw Error(ErrorKind::kEmptyInput, "memorizer needs a non-empty sample");
      }
      return FittedModel::memorize(sample);
  }
  throw Error(ErrorKind::kDomainError, "unknown model family");
}

CostVector cost_vector(const FittedModel& model, const LabeledSample& sample) {
  std::vector<double> costs(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    costs[i] = model.predict(sample.x[i]) == sample.y[i] ? 0.0 : 1.0;
  }
  return CostVector(std::move(costs));
}

double exact_expectation(const FittedModel& model, const DiscreteJoint& joint) {
  const double eta = joint.eta();
  double expectation = 0.0;
  switch (model.family()) {
    case ModelFamily::kParityOracle:
      expectation = eta;
      break;
    case ModelFamily::kConstantZero:
      expectation = eta + (1.0 - 2.0 * eta) * joint.parity_one_mass();
      break;
    case ModelFamily::kMemorizer: {
      // Start from the all-zero prediction and correct the x's memorized
      // with label 1.
      std::vector<double> terms{eta + (1.0 - 2.0 * eta) * joint.parity_one_mass()};
      for (const MemorizedLabel& entry : model.table()) {
        if (entry.x >= joint.domain_size()) {
          throw Error(ErrorKind::kDomainError,
                      "memorized x outside the joint's domain");
        }
        if (entry.label == 1) {
          terms.push_back(joint.probability(entry.x) *
                          (cost_at(1, entry.x, eta) - cost_at(0, entry.x, eta)));
        }
      }
      expectation = compensated_sum(terms);
      break;
    }
  }
  return std::clamp(expectation, 0.0, 1.0);
}

double memorized_mass(const FittedModel& model, const DiscreteJoint& joint) {
  std::vector<double> masses;
  masses.reserve(model.table().size());
  for (const MemorizedLabel& entry : model.table()) {
    if (entry.x >= joint.domain_size()) {
      throw Error(ErrorKind::kDomainError, "memorized x outside the joint's domain");
    }
    masses.push_back(joint.probability(entry.x));
  }
  return std::clamp(compensated_sum(masses), 0.0, 1.0);
}

void SimulationSpec::validate() const {
  if (m == 0 || m_prime == 0 || k == 0) {
    throw Error(ErrorKind::kDomainError, "m, m_prime and k must be >= 1");
  }
  if (trials == 0) throw Error(ErrorKind::kDomainError, "trials must be >= 1");
  if (trials >= kEpochStream) throw Error(ErrorKind::kDomainError, "too many trials");
  if (oracle_draws == 0) {
    throw Error(ErrorKind::kDomainError, "oracle_draws must be >= 1");
  }
}

double monte_carlo_slack(double bound, std::uint64_t trials) {
  const double b = std::max(bound, 0.0);
  return 3.0 * std::sqrt(b * (1.0 - std::min(b, 1.0)) / static_cast<double>(trials));
}

double oracle_mean_margin(const SimulationSpec& spec) {
  spec.validate();
  const std::vector<double> margins = run_trials<double>(
      spec.oracle_draws, spec.threads, [&](std::uint64_t draw) {
        RandomStream stream(spec.seed, kOracleStreamBase + draw);
        const LabeledSample sample = sample_dataset(spec.joint, spec.m, stream);
        const FittedModel model = train(spec.model, sample);
        return std::abs(risk_of(model, sample) -
                        exact_expectation(model, spec.joint));
      });
  return compensated_sum(margins) / static_cast<double>(margins.size());
}

namespace {

struct FixedModelOutcome {
  bool violated = false;
};

struct OverfitOutcome {
  bool flagged = false;
  bool null_held = false;
  double signed_gap = 0.0;
  double train_risk = 0.0;
  double holdout_risk = 0.0;
  double expectation = 0.0;
  double memorized = 0.0;
};

OverfitOutcome overfit_trial(const SimulationSpec& spec, double epsilon,
                             std::uint64_t trial) {
  RandomStream stream(spec.seed, trial);
  const LabeledSample sample = sample_dataset(spec.joint, spec.m, stream);
  const FittedModel model = train(spec.model, sample);
  // The holdout is drawn only after the model is fixed.
  const LabeledSample holdout = sample_dataset(spec.joint, spec.m_prime, stream);
  const CostVector train_costs = cost_vector(model, sample);
  const TestReport report =
      run_test(train_costs, cost_vector(model, holdout), TestConfig{epsilon, {}, {}});
  OverfitOutcome out;
  out.flagged = report.flagged;
  out.signed_gap = report.signed_gap;
  out.train_risk = report.risks.train_risk;
  out.holdout_risk = report.risks.holdout_risk;
  out.expectation = exact_expectation(model, spec.joint);
  out.null_held = std::abs(out.expectation - out.train_risk) < epsilon / 2.0;
  out.memorized = memorized_mass(model, spec.joint);
  return out;
}

std::vector<OverfitOutcome> overfit_trials(const SimulationSpec& spec,
                                           double epsilon) {
  return run_trials<OverfitOutcome>(spec.trials, spec.threads,
                                    [&](std::uint64_t t) {
                                      return overfit_trial(spec, epsilon, t);
                                    });
}

template <typename Outcome, typename Field>
double mean_of(const std::vector<Outcome>& outcomes, Field field) {
  std::vector<double> values;
  values.reserve(outcomes.size());
  for (const Outcome& o : outcomes) values.push_back(field(o));
  return compensated_sum(values) / static_cast<double>(values.size());
}

struct MarginOutcome {
  bool violated = false;
  bool chain_holds = true;
};

}  // namespace

ValidationRecord validate_bound(const SimulationSpec& spec, BoundKind kind,
                                double epsilon, double delta) {
  spec.validate();
  ValidationRecord record;
  record.kind = kind;
  record.family = spec.model;
  record.epsilon = epsilon;
  record.seed = spec.seed;
  record.m = spec.m;
  record.m_prime = spec.m_prime;
  record.k = kind == BoundKind::kMarginEstimate ? spec.k : 1;
  record.trials = spec.trials;
  record.bound =
      evaluate_bound(kind, epsilon,
                     kind == BoundKind::kMarginEstimate ? spec.k : spec.m_prime)
          .value;

  switch (kind) {
    case BoundKind::kFixedModel: {
      const auto outcomes = run_trials<FixedModelOutcome>(
          spec.trials, spec.threads, [&](std::uint64_t t) {
            RandomStream stream(spec.seed, t);
            const LabeledSample sample = sample_dataset(spec.joint, spec.m, stream);
            const FittedModel model = train(spec.model, sample);
            const double expectation = exact_expectation(model, spec.joint);
            const LabeledSample holdout =
                sample_dataset(spec.joint, spec.m_prime, stream);
            return FixedModelOutcome{
                std::abs(expectation - risk_of(model, holdout)) > epsilon};
          });
      record.violations = static_cast<std::uint64_t>(std::count_if(
          outcomes.begin(), outcomes.end(), [](const auto& o) { return o.violated; }));
      break;
    }
    case BoundKind::kOverfitTest: {
      const auto outcomes = overfit_trials(spec, epsilon);
      record.violations = static_cast<std::uint64_t>(std::count_if(
          outcomes.begin(), outcomes.end(), [](const auto& o) { return o.flagged; }));
      record.mean_signed_gap =
          mean_of(outcomes, [](const OverfitOutcome& o) { return o.signed_gap; });
      record.null_held_frequency = mean_of(
          outcomes, [](const OverfitOutcome& o) { return o.null_held ? 1.0 : 0.0; });
      break;
    }
    case BoundKind::kMarginEstimate: {
      const std::uint64_t required = min_holdout_size(spec.k, epsilon, delta);
      if (spec.m_prime < required) {
        std::ostringstream msg;
        msg << "m_prime = " << spec.m_prime << " is below the required "
            << required << " for k = " << spec.k << ", epsilon = " << epsilon
            << ", delta = " << delta;
        throw Error(ErrorKind::kInfeasible, msg.str());
      }
      const double mu = oracle_mean_margin(spec);
      const auto outcomes = run_trials<MarginOutcome>(
          spec.trials, spec.threads, [&](std::uint64_t t) {
            RandomStream stream(spec.seed, t);
            std::vector<LabeledSample> samples;
            std::vector<FittedModel> models;
            samples.reserve(spec.k);
            models.reserve(spec.k);
            for (std::uint64_t j = 0; j < spec.k; ++j) {
              samples.push_back(sample_dataset(spec.joint, spec.m, stream));
              models.push_back(train(spec.model, samples.back()));
            }
            // One holdout shared by all k models, drawn after they are fixed.
            const LabeledSample holdout =
                sample_dataset(spec.joint, spec.m_prime, stream);
            std::vector<MarginRun> runs;
            std::vector<double> expectations;
            runs.reserve(spec.k);
            for (std::uint64_t j = 0; j < spec.k; ++j) {
              runs.push_back({cost_vector(models[j], samples[j]),
                              cost_vector(models[j], holdout)});
              expectations.push_back(exact_expectation(models[j], spec.joint));
            }
            const MarginRunSet run_set(std::move(runs));
            const MarginEstimate estimate =
                estimate_mean_margin(run_set, epsilon, delta);
            return MarginOutcome{
                std::abs(estimate.estimate - mu) > epsilon,
                decompose_margin_error(run_set, expectations).chain_holds};
          });
      record.violations = static_cast<std::uint64_t>(std::count_if(
          outcomes.begin(), outcomes.end(), [](const auto& o) { return o.violated; }));
      record.delta = delta;
      record.required_m_prime = required;
      record.oracle_mean_margin = mu;
      record.chain_failures = static_cast<std::uint64_t>(
          std::count_if(outcomes.begin(), outcomes.end(),
                        [](const auto& o) { return !o.chain_holds; }));
      break;
    }
  }

  record.violation_frequency = frequency(record.violations, spec.trials);
  record.slack = monte_carlo_slack(record.bound, spec.trials);
  record.pass = record.violation_frequency <= record.bound + record.slack;
  return record;
}

PowerRecord detection_power(const SimulationSpec& spec, double epsilon) {
  spec.validate();
  const auto outcomes = overfit_trials(spec, epsilon);
  PowerRecord record;
  record.family = spec.model;
  record.epsilon = epsilon;
  record.trials = spec.trials;
  // No alpha gating, so a rejection is exactly a flag.
  record.rejections = static_cast<std::uint64_t>(std::count_if(
      outcomes.begin(), outcomes.end(), [](const auto& o) { return o.flagged; }));
  record.rejection_frequency = frequency(record.rejections, spec.trials);
  record.mean_signed_gap = mean_of(outcomes, [](const auto& o) { return o.signed_gap; });
  record.mean_train_risk = mean_of(outcomes, [](const auto& o) { return o.train_risk; });
  record.mean_holdout_risk =
      mean_of(outcomes, [](const auto& o) { return o.holdout_risk; });
  record.mean_true_expectation =
      mean_of(outcomes, [](const auto& o) { return o.expectation; });
  record.mean_memorized_mass =
      mean_of(outcomes, [](const auto& o) { return o.memorized; });
  return record;
}

InSampleGapRecord in_sample_gap(const SimulationSpec& spec, double epsilon) {
  spec.validate();
  const std::vector<char> exceeded = run_trials<char>(
      spec.trials, spec.threads, [&](std::uint64_t t) -> char {
        RandomStream stream(spec.seed, t);
        const LabeledSample sample = sample_dataset(spec.joint, spec.m, stream);
        const FittedModel model = train(spec.model, sample);
        return std::abs(risk_of(model, sample) -
                        exact_expectation(model, spec.joint)) > epsilon;
      });
  InSampleGapRecord record;
  record.family = spec.model;
  record.epsilon = epsilon;
  record.trials = spec.trials;
  record.exceed_frequency = frequency(
      static_cast<std::uint64_t>(std::count(exceeded.begin(), exceeded.end(), 1)),
      spec.trials);
  record.reference_bound = fixed_model_bound(epsilon, spec.m);
  record.bound_applies = is_sample_independent(spec.model);
  return record;
}

EpochCurve epoch_curve(const SimulationSpec& spec, std::uint64_t epochs,
                       double epsilon) {
  spec.validate();
  if (epochs == 0) throw Error(ErrorKind::kDomainError, "epochs must be >= 1");
  const TestConfig config{epsilon, {}, {}};
  config.validate();

  RandomStream stream(spec.seed, kEpochStream);
  const LabeledSample sample = sample_dataset(spec.joint, spec.m, stream);
  const FittedModel full = train(spec.model, sample);
  const LabeledSample holdout = sample_dataset(spec.joint, spec.m_prime, stream);

  EpochCurve curve;
  curve.epsilon = epsilon;
  curve.bound = overfit_test_bound(epsilon, spec.m_prime);
  std::vector<std::uint32_t> seen;
  std::uint64_t consumed = 0;
  for (std::uint64_t epoch = 0; epoch <= epochs; ++epoch) {
    const std::uint64_t target = epoch * spec.m / epochs;
    for (; consumed < target; ++consumed) seen.push_back(sample.x[consumed]);
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());

    FittedModel model = full;
    if (spec.model == ModelFamily::kMemorizer) {
      // Restrict the full-sample table to the x's memorized so far.
      LabeledSample partial;
      for (const MemorizedLabel& entry : full.table()) {
        if (std::binary_search(seen.begin(), seen.end(), entry.x)) {
          partial.x.push_back(entry.x);
          partial.y.push_back(entry.label);
        }
      }
      model = FittedModel::memorize(partial);
    }
    const TestReport report =
        run_test(cost_vector(model, sample), cost_vector(model, holdout), config);
    curve.records.push_back({epoch, target, report.risks.train_risk,
                             report.risks.holdout_risk, report.margin,
                             report.signed_gap, report.flagged});
  }
  return curve;
}

}  // namespace overfit
