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

// Input file formats and JSON report serialization.
//
// Cost file: lines split on LF with an optional trailing CR stripped. Each
// line, after trimming spaces and tabs, is blank (ignored), a comment
// starting with '#' (ignored), or one finite decimal literal.
//
// Run-set file (JSONL): one JSON object per non-blank line with numeric
// arrays "train_costs" and "holdout_costs". All records must share the same
// lengths.
//
// Every report object starts with "schema_version": 1.

#ifndef OVERFIT_IO_H_
#define OVERFIT_IO_H_

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "overfit/hoeffding.h"
#include "overfit/margin.h"
#include "overfit/overfit_test.h"
#include "overfit/risk.h"
#include "overfit/simulation.h"

namespace overfit {

inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::ordered_json;

// Parses a cost file. Values must lie in the probe range when one is given,
// else in [0,1]. Errors are Error{kParseError} or Error{kOutOfRange} with a
// "<source>:<line>: " prefix.
std::vector<double> parse_cost_lines(std::istream& in, std::string_view source,
                                     const std::optional<ProbeRange>& range = {});

std::vector<double> read_cost_file(const std::string& path,
                                   const std::optional<ProbeRange>& range = {});

// One value per line with 17 significant digits, so re-parsing is exact.
void write_cost_file(std::ostream& out, const CostVector& costs);

// Errors name the offending line; ragged records produce Error{kRaggedRuns}
// with one diagnostic per mismatching record.
MarginRunSet parse_run_set(std::istream& in, std::string_view source);
MarginRunSet read_run_set_file(const std::string& path);

void write_run_set(std::ostream& out, const MarginRunSet& runs);

// "%.6e" rendering used next to raw bound values.
std::string scientific(double value);

Json to_json(const TestReport& report);
Json to_json(const MarginEstimate& estimate);
Json to_json(const HoeffdingSolution& solution);
Json to_json(const ValidationRecord& record);
Json to_json(const PowerRecord& record);
Json to_json(const InSampleGapRecord& record);
Json to_json(const EpochCurve& curve);

}  // namespace overfit

#endif  // OVERFIT_IO_H_
