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

#include "overfit/io.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "overfit/error.h"

namespace overfit {
namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail_at(ErrorKind kind, std::string_view source,
                          std::size_t line, const std::string& what) {
  std::ostringstream msg;
  msg << source << ":" << line << ": " << what;
  throw Error(kind, msg.str());
}

// Reads one LF-terminated line and drops a trailing CR.
bool next_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

std::string range_text(const std::optional<ProbeRange>& range) {
  std::ostringstream out;
  out.precision(17);
  if (range) {
    out << "[" << range->lo << "," << range->hi << "]";
  } else {
    out << "[0,1]";
  }
  return out.str();
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kParseError, path + ": cannot open file");
  return in;
}

std::vector<double> number_array(const Json& record, const char* field,
                                 std::string_view source, std::size_t line) {
  const auto it = record.find(field);
  if (it == record.end()) {
    fail_at(ErrorKind::kParseError, source, line,
            std::string("missing field \"") + field + "\"");
  }
  if (!it->is_array()) {
    fail_at(ErrorKind::kParseError, source, line,
            std::string("field \"") + field + "\" must be an array of numbers");
  }
  std::vector<double> values;
  values.reserve(it->size());
  for (std::size_t i = 0; i < it->size(); ++i) {
    const Json& element = (*it)[i];
    if (!element.is_number()) {
      fail_at(ErrorKind::kParseError, source, line,
              std::string(field) + "[" + std::to_string(i) + "] is not a number");
    }
    const double v = element.get<double>();
    if (!(v >= 0.0 && v <= 1.0)) {
      std::ostringstream what;
      what.precision(17);
      what << field << "[" << i << "] = " << v << " is outside [0,1]";
      fail_at(ErrorKind::kOutOfRange, source, line, what.str());
    }
    values.push_back(v);
  }
  if (values.empty()) {
    fail_at(ErrorKind::kEmptyInput, source, line,
            std::string("field \"") + field + "\" is empty");
  }
  return values;
}

Json optional_number(const std::optional<double>& value) {
  return value ? Json(*value) : Json(nullptr);
}

}  // namespace

std::vector<double> parse_cost_lines(std::istream& in, std::string_view source,
                                     const std::optional<ProbeRange>& range) {
  const double lo = range ? range->lo : 0.0;
  const double hi = range ? range->hi : 1.0;
  std::vector<double> values;
  std::string raw;
  std::size_t line_no = 0;
  while (next_line(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), value);
    if (ec != std::errc() || ptr != line.data() + line.size() || !std::isfinite(value)) {
      fail_at(ErrorKind::kParseError, source, line_no,
              "not a finite decimal number: \"" + std::string(line) + "\"");
    }
    if (!(value >= lo && value <= hi)) {
      fail_at(ErrorKind::kOutOfRange, source, line_no,
              "value " + std::string(line) + " is outside " + range_text(range));
    }
    values.push_back(value);
  }
  if (in.bad()) throw Error(ErrorKind::kParseError, std::string(source) + ": read error");
  if (values.empty()) {
    throw Error(ErrorKind::kEmptyInput, std::string(source) + ": no values");
  }
  return values;
}

std::vector<double> read_cost_file(const std::string& path,
                                   const std::optional<ProbeRange>& range) {
  std::ifstream in = open_or_throw(path);
  return parse_cost_lines(in, path, range);
}

void write_cost_file(std::ostream& out, const CostVector& costs) {
  char buf[40];
  for (const double v : costs.values()) {
    std::snprintf(buf, sizeof(buf), "%.17g\n", v);
    out << buf;
  }
}

MarginRunSet parse_run_set(std::istream& in, std::string_view source) {
  std::vector<MarginRun> runs;
  std::vector<std::size_t> lines;
  std::string raw;
  std::size_t line_no = 0;
  while (next_line(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    Json record = Json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (record.is_discarded()) {
      fail_at(ErrorKind::kParseError, source, line_no, "malformed JSON record");
    }
    if (!record.is_object()) {
      fail_at(ErrorKind::kParseError, source, line_no, "record must be a JSON object");
    }
    runs.push_back({CostVector(number_array(record, "train_costs", source, line_no)),
                    CostVector(number_array(record, "holdout_costs", source, line_no))});
    lines.push_back(line_no);
  }
  if (runs.empty()) {
    throw Error(ErrorKind::kEmptyInput, std::string(source) + ": no records");
  }

  const std::size_t m = runs.front().train_costs.size();
  const std::size_t m_prime = runs.front().holdout_costs.size();
  std::ostringstream ragged;
  for (std::size_t j = 1; j < runs.size(); ++j) {
    if (runs[j].train_costs.size() != m) {
      ragged << source << ":" << lines[j] << ": train_costs has "
             << runs[j].train_costs.size() << " values, expected " << m
             << " (line " << lines.front() << ")\n";
    }
    if (runs[j].holdout_costs.size() != m_prime) {
      ragged << source << ":" << lines[j] << ": holdout_costs has "
             << runs[j].holdout_costs.size() << " values, expected " << m_prime
             << " (line " << lines.front() << ")\n";
    }
  }
  std::string diagnostics = ragged.str();
  if (!diagnostics.empty()) {
    diagnostics.pop_back();
    throw Error(ErrorKind::kRaggedRuns, diagnostics);
  }
  return MarginRunSet(std::move(runs));
}

MarginRunSet read_run_set_file(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  return parse_run_set(in, path);
}

void write_run_set(std::ostream& out, const MarginRunSet& runs) {
  for (const MarginRun& run : runs.runs()) {
    Json record;
    record["train_costs"] = std::vector<double>(run.train_costs.values().begin(),
                                                run.train_costs.values().end());
    record["holdout_costs"] = std::vector<double>(
        run.holdout_costs.values().begin(), run.holdout_costs.values().end());
    out << record.dump() << "\n";
  }
}

std::string scientific(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6e", value);
  return buf;
}

Json to_json(const TestReport& report) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["m"] = report.risks.train_size;
  j["m_prime"] = report.risks.holdout_size;
  j["train_risk"] = report.risks.train_risk;
  j["holdout_risk"] = report.risks.holdout_risk;
  j["margin"] = report.margin;
  j["signed_gap"] = report.signed_gap;
  j["epsilon"] = report.epsilon;
  j["null_precision"] = report.null_precision();
  j["alpha"] = optional_number(report.significance_alpha);
  j["bound"] = report.bound;
  j["bound_sci"] = scientific(report.bound);
  j["vacuous"] = report.vacuous();
  j["flagged"] = report.flagged;
  j["decision"] = decision_name(report.decision);
  Json interpretations = Json::array();
  for (const Interpretation& item : report.interpretations) {
    interpretations.push_back(
        {{"kind", interpretation_kind_name(item.kind)}, {"text", item.text}});
  }
  j["interpretations"] = std::move(interpretations);
  return j;
}

Json to_json(const MarginEstimate& estimate) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["estimate"] = estimate.estimate;
  j["k"] = estimate.k;
  j["m"] = estimate.m;
  j["m_prime"] = estimate.m_prime;
  j["epsilon"] = estimate.epsilon;
  j["delta"] = estimate.delta;
  j["bound"] = estimate.bound;
  j["bound_sci"] = scientific(estimate.bound);
  j["vacuous"] = estimate.vacuous();
  j["hypothesis_satisfied"] = estimate.hypothesis_satisfied;
  j["required_m_prime"] = estimate.required_m_prime;
  j["warnings"] = estimate.warnings;
  return j;
}

Json to_json(const HoeffdingSolution& solution) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["epsilon"] = solution.epsilon;
  j["delta"] = solution.delta;
  j["delta_sci"] = scientific(solution.delta);
  j["log_delta"] = solution.log_delta;
  j["m"] = solution.m;
  j["solved_for"] = hoeffding_unknown_name(solution.solved_for);
  j["vacuous"] = solution.vacuous();
  return j;
}

Json to_json(const ValidationRecord& record) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = bound_kind_name(record.kind);
  j["family"] = model_family_name(record.family);
  j["epsilon"] = record.epsilon;
  j["seed"] = record.seed;
  j["m"] = record.m;
  j["m_prime"] = record.m_prime;
  j["k"] = record.k;
  j["trials"] = record.trials;
  j["violations"] = record.violations;
  j["violation_frequency"] = record.violation_frequency;
  j["bound"] = record.bound;
  j["bound_sci"] = scientific(record.bound);
  j["slack"] = record.slack;
  j["pass"] = record.pass;
  if (record.mean_signed_gap) j["mean_signed_gap"] = *record.mean_signed_gap;
  if (record.null_held_frequency) j["null_held_frequency"] = *record.null_held_frequency;
  if (record.delta) j["delta"] = *record.delta;
  if (record.required_m_prime) j["required_m_prime"] = *record.required_m_prime;
  if (record.oracle_mean_margin) j["oracle_mean_margin"] = *record.oracle_mean_margin;
  if (record.chain_failures) j["chain_failures"] = *record.chain_failures;
  return j;
}

Json to_json(const PowerRecord& record) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["family"] = model_family_name(record.family);
  j["epsilon"] = record.epsilon;
  j["trials"] = record.trials;
  j["rejections"] = record.rejections;
  j["rejection_frequency"] = record.rejection_frequency;
  j["mean_signed_gap"] = record.mean_signed_gap;
  j["mean_train_risk"] = record.mean_train_risk;
  j["mean_holdout_risk"] = record.mean_holdout_risk;
  j["mean_true_expectation"] = record.mean_true_expectation;
  j["mean_memorized_mass"] = record.mean_memorized_mass;
  return j;
}

Json to_json(const InSampleGapRecord& record) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["family"] = model_family_name(record.family);
  j["epsilon"] = record.epsilon;
  j["trials"] = record.trials;
  j["exceed_frequency"] = record.exceed_frequency;
  j["reference_bound"] = record.reference_bound;
  j["reference_bound_sci"] = scientific(record.reference_bound);
  j["bound_applies"] = record.bound_applies;
  return j;
}

Json to_json(const EpochCurve& curve) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["epsilon"] = curve.epsilon;
  j["bound"] = curve.bound;
  j["bound_sci"] = scientific(curve.bound);
  Json rows = Json::array();
  for (const EpochRecord& r : curve.records) {
    rows.push_back({{"epoch", r.epoch},
                    {"memorized_points", r.memorized_points},
                    {"train_risk", r.train_risk},
                    {"holdout_risk", r.holdout_risk},
                    {"margin", r.margin},
                    {"signed_gap", r.signed_gap},
                    {"flagged", r.flagged}});
  }
  j["records"] = std::move(rows);
  return j;
}

}  // namespace overfit
