// Copyright 2026 The randstruct Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <string>

#include "randstruct/experiment.hpp"
#include "randstruct/report.hpp"

namespace randstruct {
namespace {

ExperimentConfig small(ExperimentKind kind) {
  ExperimentConfig c;
  c.experiment = kind;
  c.n = 211;
  c.p = 0.5;
  c.alpha = 0.4;
  c.k = 2;
  if (kind == ExperimentKind::kSumsetSize) c.beta = 0.15;
  c.seeds = parse_seed_spec("4");
  return c;
}

TEST(Config, Validation) {
  ExperimentConfig c = small(ExperimentKind::kSarkozy);
  EXPECT_NO_THROW(c.validate());
  c.n = 210;
  EXPECT_THROW(c.validate(), ConfigError);
  c = small(ExperimentKind::kSarkozy);
  c.p = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = small(ExperimentKind::kSarkozy);
  c.alpha = 1.2;
  EXPECT_THROW(c.validate(), ConfigError);
  c = small(ExperimentKind::kSumsetSize);
  c.beta = 0.5;
  EXPECT_THROW(c.validate(), ConfigError);
  c.beta.reset();
  EXPECT_THROW(c.validate(), ConfigError);
  c = small(ExperimentKind::kSarkozy);
  c.format = "xml";
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Config, Defaults) {
  ExperimentConfig c = small(ExperimentKind::kSarkozy);
  EXPECT_DOUBLE_EQ(c.resolved_q(), 23.0 / 11.0);
  c.experiment = ExperimentKind::kSumsetAp;
  EXPECT_DOUBLE_EQ(c.resolved_q(), 19.0 / 9.0);
  c.experiment = ExperimentKind::kPowerDiff;
  c.k = 3;
  EXPECT_DOUBLE_EQ(c.resolved_q(), 35.0 / 17.0);
  EXPECT_DOUBLE_EQ(c.resolved_eta_budget(), 3.0 * std::pow(211.0, -0.2));
}

TEST(Config, SeedSpecs) {
  EXPECT_EQ(parse_seed_spec("3"), (std::vector<std::uint64_t>{0, 1, 2}));
  EXPECT_EQ(parse_seed_spec("5-7"), (std::vector<std::uint64_t>{5, 6, 7}));
  EXPECT_EQ(parse_seed_spec("9,2,4"), (std::vector<std::uint64_t>{9, 2, 4}));
  EXPECT_THROW(parse_seed_spec("7-5"), ConfigError);
  EXPECT_THROW(parse_seed_spec("x"), ConfigError);
}

TEST(Config, JsonRoundTrip) {
  ExperimentConfig c = small(ExperimentKind::kSumsetSize);
  c.strategy = SubsetStrategy::kProgressionIntersect;
  const ExperimentConfig back = config_from_json(config_to_json(c));
  EXPECT_EQ(back.experiment, c.experiment);
  EXPECT_EQ(back.n, c.n);
  EXPECT_EQ(back.seeds, c.seeds);
  EXPECT_EQ(back.strategy, c.strategy);
  EXPECT_DOUBLE_EQ(*back.beta, *c.beta);
  EXPECT_THROW(config_from_json(json{{"experiment", "bogus"}}), ConfigError);
  EXPECT_THROW(config_from_json(json{{"n", "many"}}), ConfigError);
  EXPECT_THROW(config_from_json(json{{"schema_version", 99}}), ConfigError);
}

TEST(RunTrials, EveryExperimentRunsWithoutExceptions) {
  for (auto kind : {ExperimentKind::kSarkozy, ExperimentKind::kPowerDiff, ExperimentKind::kSumsetSize,
                    ExperimentKind::kSumsetAp, ExperimentKind::kDecompositionAudit,
                    ExperimentKind::kIncrementTrace}) {
    const ExperimentReport r = run_trials(small(kind));
    ASSERT_EQ(r.trials(), 4u);
    for (const TrialRow& row : r.rows) {
      for (const std::string& a : row.anomalies) EXPECT_EQ(a.find("exception"), std::string::npos) << a;
      EXPECT_LE(row.a_size, row.w_size);
    }
  }
}

TEST(RunTrials, IndependentOfThreadCount) {
  ExperimentConfig c = small(ExperimentKind::kSarkozy);
  c.seeds = parse_seed_spec("12");
  c.threads = 1;
  const std::string one = to_csv(run_trials(c));
  c.threads = 5;
  EXPECT_EQ(to_csv(run_trials(c)), one);
}

TEST(Report, CsvAndJsonRoundTrip) {
  ExperimentConfig c = small(ExperimentKind::kSumsetSize);
  c.strategy = SubsetStrategy::kProgressionIntersect;
  const ExperimentReport r = run_trials(c);
  const std::string csv = to_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kCsvColumns);
  ExperimentReport parsed;
  parsed.rows = parse_csv_rows(csv);
  EXPECT_EQ(to_csv(parsed), csv);
  EXPECT_EQ(parsed.successes(), r.successes());

  const ExperimentReport back = report_from_json(json::parse(to_json(r).dump()));
  EXPECT_EQ(to_csv(back), csv);
  EXPECT_EQ(aggregate_json(back), aggregate_json(r));
  EXPECT_TRUE(to_json(r)["metadata"].contains("generated_at"));
  EXPECT_EQ(csv.find("T00"), std::string::npos);
}

TEST(Report, CsvEscapesAnomalies) {
  ExperimentReport r;
  TrialRow row;
  row.anomalies = {"a, with comma", "quote \" here"};
  r.rows.push_back(row);
  const auto parsed = parse_csv_rows(to_csv(r));
  ASSERT_EQ(parsed.size(), 1u);
  EXPECT_EQ(parsed[0].anomalies, row.anomalies);
  EXPECT_THROW(parse_csv_rows("nope\n"), std::runtime_error);
}

TEST(Report, WriteFailureNamesPath) {
  ExperimentReport r;
  try {
    emit_report(r, "csv", "/nonexistent-dir/x.csv");
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent-dir/x.csv"), std::string::npos);
  }
}

TEST(RunTrials, FullSetIsTrivial) {
  ExperimentConfig c = small(ExperimentKind::kSarkozy);
  c.p = 1.0;
  c.alpha = 1.0;
  EXPECT_EQ(run_trials(c).success_fraction(), 1.0);
  c.experiment = ExperimentKind::kSumsetAp;
  c.k = 5;
  const ExperimentReport r = run_trials(c);
  for (const TrialRow& row : r.rows) EXPECT_EQ(row.metric, 211.0);
}

TEST(Report, EmptySeedList) {
  ExperimentConfig c = small(ExperimentKind::kSarkozy);
  c.seeds.clear();
  const ExperimentReport r = run_trials(c);
  EXPECT_EQ(to_csv(r), std::string(kCsvColumns) + "\n");
  const json j = json::parse(to_json(r).dump());
  EXPECT_TRUE(j["rows"].empty());
  EXPECT_EQ(j["aggregate"]["trials"], 0);
}

TEST(Config, DefaultEpsilonRuleIsLogged) {
  ExperimentConfig c = small(ExperimentKind::kSarkozy);
  EXPECT_NEAR(c.resolved_epsilon0(), 2.0 / std::log(211.0), 1e-15);
  const json m = run_trials(c).metadata;
  EXPECT_EQ(m["constraint_checks"]["epsilon0_rule"], "default 2/ln N");
  EXPECT_TRUE(m["constraint_checks"]["pp_e1"]["holds"].get<bool>());
  c.epsilon0 = 0.05;
  EXPECT_EQ(run_trials(c).metadata["constraint_checks"]["epsilon0_rule"], "configured");
}

}  // namespace
}  // namespace randstruct
