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

#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "test_util.h"

namespace overfit {
namespace {

using testing::error_kind;

std::vector<double> parse(const std::string& text,
                          const std::optional<ProbeRange>& range = {}) {
  std::istringstream in(text);
  return parse_cost_lines(in, "costs.txt", range);
}

std::string error_message(const std::string& text) {
  try {
    parse(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

TEST(CostFile, BasicGrammar) {
  EXPECT_EQ(parse("0.5\n0.25\n"), (std::vector<double>{0.5, 0.25}));
  EXPECT_EQ(parse("0.5\r\n1\r\n0"), (std::vector<double>{0.5, 1.0, 0.0}));
  EXPECT_EQ(parse("# header\n\n  0.1\t\n   \n#0.9\n1e-3\n"),
            (std::vector<double>{0.1, 1e-3}));
}

TEST(CostFile, LineNumberedErrors) {
  EXPECT_EQ(error_kind([] { parse("0.1\n0.2\n1.5\n"); }), ErrorKind::kOutOfRange);
  EXPECT_NE(error_message("0.1\n0.2\n1.5\n").find("costs.txt:3"), std::string::npos);
  EXPECT_EQ(error_kind([] { parse("0.1\nabc\n"); }), ErrorKind::kParseError);
  EXPECT_NE(error_message("0.1\nabc\n").find("costs.txt:2"), std::string::npos);
  EXPECT_EQ(error_kind([] { parse("0.1 0.2\n"); }), ErrorKind::kParseError);
  EXPECT_EQ(error_kind([] { parse("nan\n"); }), ErrorKind::kParseError);
  EXPECT_EQ(error_kind([] { parse("inf\n"); }), ErrorKind::kParseError);
  EXPECT_EQ(error_kind([] { parse("-0.1\n"); }), ErrorKind::kOutOfRange);
}

TEST(CostFile, EmptyFile) {
  EXPECT_EQ(error_kind([] { parse(""); }), ErrorKind::kEmptyInput);
  EXPECT_EQ(error_kind([] { parse("# only a comment\n\n"); }), ErrorKind::kEmptyInput);
}

TEST(CostFile, ProbeRange) {
  EXPECT_EQ(parse("-3\n7\n", ProbeRange{-5, 10}), (std::vector<double>{-3, 7}));
  EXPECT_EQ(error_kind([] { parse("11\n", ProbeRange{-5, 10}); }),
            ErrorKind::kOutOfRange);
}

TEST(CostFile, MissingFile) {
  EXPECT_EQ(error_kind([] { read_cost_file("/nonexistent/costs.txt"); }),
            ErrorKind::kParseError);
}

TEST(CostFileProperty, RoundTripIsExact) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> len(1, 200);
  for (int iter = 0; iter < 500; ++iter) {
    std::vector<double> v(len(rng));
    for (double& x : v) {
      x = unit(rng);
      // Exercise subnormals, exact endpoints and tiny values.
      if (iter % 7 == 0) x = std::ldexp(x, -1060);
      if (iter % 11 == 0) x = std::round(x);
    }
    const CostVector costs(v);
    std::ostringstream out;
    write_cost_file(out, costs);
    const CostVector back(parse(out.str()));
    ASSERT_EQ(back, costs);
  }
}

MarginRunSet parse_runs(const std::string& text) {
  std::istringstream in(text);
  return parse_run_set(in, "runs.jsonl");
}

std::string run_error(const std::string& text) {
  try {
    parse_runs(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

TEST(RunSet, Parses) {
  const MarginRunSet runs = parse_runs(
      R"({"train_costs": [0, 0.5], "holdout_costs": [0.1, 0.2, 0.3]})"
      "\n\n"
      R"({"holdout_costs": [1, 1, 1], "train_costs": [1, 0]})"
      "\n");
  EXPECT_EQ(runs.k(), 2u);
  EXPECT_EQ(runs.m(), 2u);
  EXPECT_EQ(runs.m_prime(), 3u);
  EXPECT_EQ(runs.runs()[1].holdout_costs, CostVector({1, 1, 1}));
}

TEST(RunSet, MalformedLineIsNamed) {
  const std::string text =
      R"({"train_costs": [0], "holdout_costs": [0.1]})"
      "\n"
      R"({"train_costs": [0], "holdout_costs": )"
      "\n";
  EXPECT_EQ(error_kind([&] { parse_runs(text); }), ErrorKind::kParseError);
  EXPECT_NE(run_error(text).find("runs.jsonl:2"), std::string::npos) << run_error(text);
}

TEST(RunSet, FieldErrors) {
  EXPECT_EQ(error_kind([] { parse_runs("[1, 2]\n"); }), ErrorKind::kParseError);
  EXPECT_EQ(error_kind([] { parse_runs(R"({"train_costs": [0]})"); }),
            ErrorKind::kParseError);
  EXPECT_EQ(error_kind([] {
              parse_runs(R"({"train_costs": ["a"], "holdout_costs": [0]})");
            }),
            ErrorKind::kParseError);
  EXPECT_EQ(error_kind([] {
              parse_runs(R"({"train_costs": [2], "holdout_costs": [0]})");
            }),
            ErrorKind::kOutOfRange);
  EXPECT_EQ(error_kind([] {
              parse_runs(R"({"train_costs": [], "holdout_costs": [0]})");
            }),
            ErrorKind::kEmptyInput);
  EXPECT_EQ(error_kind([] { parse_runs("\n\n"); }), ErrorKind::kEmptyInput);
}

TEST(RunSet, RaggedDiagnostics) {
  const std::string text =
      R"({"train_costs": [0, 0], "holdout_costs": [0.1, 0.2]})"
      "\n"
      R"({"train_costs": [0], "holdout_costs": [0.1, 0.2]})"
      "\n"
      R"({"train_costs": [0, 1], "holdout_costs": [0.1]})"
      "\n";
  EXPECT_EQ(error_kind([&] { parse_runs(text); }), ErrorKind::kRaggedRuns);
  const std::string message = run_error(text);
  EXPECT_NE(message.find("runs.jsonl:2"), std::string::npos) << message;
  EXPECT_NE(message.find("runs.jsonl:3"), std::string::npos) << message;
}

TEST(RunSet, WriteThenParse) {
  const MarginRunSet runs({{CostVector({0.1, 0.2}), CostVector({0.3})},
                           {CostVector({1.0 / 3.0, 0.0}), CostVector({0.7})}});
  std::ostringstream out;
  write_run_set(out, runs);
  const MarginRunSet back = parse_runs(out.str());
  ASSERT_EQ(back.k(), 2u);
  for (std::size_t j = 0; j < 2; ++j) {
    EXPECT_EQ(back.runs()[j].train_costs, runs.runs()[j].train_costs);
    EXPECT_EQ(back.runs()[j].holdout_costs, runs.runs()[j].holdout_costs);
  }
}

TEST(Json, TestReportFields) {
  const TestReport r =
      run_test(CostVector({0.0, 0.0}), CostVector({0.5, 0.5}), {0.2, 0.05, {}});
  const Json j = to_json(r);
  EXPECT_EQ(j.begin().key(), "schema_version");
  EXPECT_EQ(j["schema_version"], 1);
  for (const char* key : {"m", "m_prime", "train_risk", "holdout_risk", "margin",
                          "signed_gap", "epsilon", "bound", "bound_sci", "vacuous",
                          "flagged", "decision", "interpretations"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["m_prime"], 2);
  EXPECT_EQ(j["alpha"], 0.05);
  EXPECT_EQ(j["flagged"], true);
  EXPECT_EQ(j["decision"], "NullRetained");
  EXPECT_EQ(j["interpretations"].size(), 3u);
  EXPECT_EQ(j["bound_sci"], scientific(r.bound));
}

TEST(Json, NumbersRoundTrip) {
  const HoeffdingSolution s = solve_hoeffding({0.1, std::nullopt, 200});
  const Json j = Json::parse(to_json(s).dump());
  EXPECT_EQ(j["delta"].get<double>(), s.delta);
  EXPECT_EQ(j["solved_for"], "delta");
  EXPECT_EQ(j["m"], 200);
}

TEST(Json, MarginEstimateFields) {
  const MarginRunSet runs({{CostVector({0.0}), CostVector({0.5, 0.5})}});
  const Json j = to_json(estimate_mean_margin(runs, 0.1, 0.05));
  EXPECT_EQ(j["estimate"], 0.5);
  EXPECT_EQ(j["k"], 1);
  EXPECT_EQ(j["hypothesis_satisfied"], false);
  EXPECT_EQ(j["required_m_prime"], 601);
  EXPECT_EQ(j["vacuous"], true);
  EXPECT_EQ(j["warnings"][0], "HypothesisUnmet");
}

TEST(Scientific, Format) {
  EXPECT_EQ(scientific(8.4967085105831780e-18), "8.496709e-18");
  EXPECT_EQ(scientific(0.5), "5.000000e-01");
}

}  // namespace
}  // namespace overfit
