// Copyright 2026 The DFL-SFGE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "dfl/errors.h"
#include "dfl/experiment.h"
#include "dfl/serialization.h"

namespace dfl {
namespace {

RunRecord Record(const std::string& method, double rho, double rel,
                 double infeas) {
  RunRecord r;
  r.benchmark = "kp_weights";
  r.method = method;
  r.rho = rho;
  r.rel_pregret = rel;
  r.feas_rel_pregret = rel / 2;
  r.infeas_ratio = infeas;
  r.mse = 1.0;
  r.epochs = 3;
  return r;
}

const TableRow* FindRow(const std::vector<TableRow>& rows,
                        const std::string& method, const std::string& metric) {
  for (const TableRow& r : rows) {
    if (r.method == method && r.metric == metric) return &r;
  }
  return nullptr;
}

ExperimentConfig TinyConfig(const std::string& benchmark) {
  ExperimentConfig c = DeskPreset(benchmark);
  c.gen.n_instances = 60;
  c.gen.probe_samples = 200;
  c.gen.n_items = benchmark == "wsmc" ? 3 : 6;
  c.train.max_epochs = 2;
  c.n_datasets = 2;
  c.n_splits = 1;
  c.workers = 2;
  c.seed = 7;
  return c;
}

TEST(ExperimentTest, TablesUseSampleStandardDeviation) {
  const std::vector<RunRecord> records = {Record("sfge", 5, 0.1, 0.2),
                                          Record("sfge", 5, 0.3, 0.4),
                                          Record("pfl_nll", 5, 0.5, 0.0)};
  const auto rows = AggregateTables(records);
  const TableRow* sfge = FindRow(rows, "sfge", "rel_pregret");
  ASSERT_NE(sfge, nullptr);
  EXPECT_NEAR(sfge->mean, 0.2, 1e-15);
  EXPECT_NEAR(sfge->std, std::sqrt(0.02), 1e-12);
  EXPECT_EQ(sfge->n, 2);
  const TableRow* pfl = FindRow(rows, "pfl_nll", "rel_pregret");
  ASSERT_NE(pfl, nullptr);
  EXPECT_EQ(pfl->std, 0.0);
  EXPECT_EQ(pfl->n, 1);
  EXPECT_EQ(rows.size(), 14u);
}

TEST(ExperimentTest, FeasibleColumnOmittedWhenAlwaysInfeasible) {
  const std::vector<RunRecord> records = {Record("sfge", 5, 0.1, 0.99),
                                          Record("sfge", 5, 0.3, 1.0),
                                          Record("pfl_nll", 5, 0.5, 0.99),
                                          Record("pfl_nll", 5, 0.5, 0.5)};
  const auto rows = AggregateTables(records);
  EXPECT_EQ(FindRow(rows, "sfge", "feas_rel_pregret"), nullptr);
  EXPECT_NE(FindRow(rows, "pfl_nll", "feas_rel_pregret"), nullptr);
}

TEST(ExperimentTest, FailedRecordsAreSkippedInTables) {
  RunRecord failed = Record("sfge", 5, 0.0, 0.0);
  failed.status = "failed:boom";
  const std::vector<RunRecord> records = {failed, Record("sfge", 5, 0.4, 0)};
  const auto rows = AggregateTables(records);
  EXPECT_EQ(FindRow(rows, "sfge", "rel_pregret")->n, 1);
  EXPECT_THROW(AggregateTables({}), DflError);
}

TEST(ExperimentTest, RunRecordCsvRoundTripIsExact) {
  RunRecord a = Record("sfge", 10, 1.0 / 3.0, 0.25);
  a.dataset_seed = 18446744073709551615ULL;
  a.split_seed = 12;
  a.train_time_s = 0.123456789;
  RunRecord b = Record("pfl_nll", 10, 2.0, 1.0);
  b.feas_rel_pregret.reset();
  b.status = "failed:bad; input";
  const std::vector<RunRecord> records = {a, b};
  const std::string csv = RunRecordsToCsv(records);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "benchmark,method,rho,dataset_seed,split_seed,status,rel_pregret,"
            "feas_rel_pregret,infeas_ratio,mse,epochs,train_time_s,"
            "inference_time_s");
  const auto back = RunRecordsFromCsv(csv);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_TRUE(SameRecord(back[0], a, true));
  EXPECT_TRUE(SameRecord(back[1], b, true));
  EXPECT_THROW(RunRecordsFromCsv("a,b\n"), DflError);
  EXPECT_THROW(RunRecordsFromCsv(csv + "x,y\n"), DflError);
}

TEST(ExperimentTest, TablesCsvHeader) {
  const std::vector<RunRecord> records = {Record("sfge", 5, 0.1, 0.2)};
  const std::string csv = TablesToCsv(AggregateTables(records));
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "benchmark,method,rho,metric,mean,std,n");
}

TEST(ExperimentTest, PlotdataNormalizesRuntimeAtSingleScenario) {
  std::vector<SaaCell> cells(2);
  for (int c = 0; c < 2; ++c) {
    cells[c].benchmark = "wsmc";
    cells[c].rho = 10;
    cells[c].points = {{1, 3.0 + c, 0.01 * (c + 1), 0},
                       {5, 2.0, 0.1 * (c + 1), 0},
                       {25, 1.0, 1.0 * (c + 1), 0}};
    cells[c].pfl_rel_pregret = 4.0;
    cells[c].sfge_rel_pregret = 1.5 + c;
    cells[c].sfge_inference_time_s = 0.001 * (c + 1);
  }
  const Json j = EmitPlotdata(cells);
  ASSERT_EQ(j["series"].size(), 1u);
  const Json& s = j["series"][0];
  EXPECT_EQ(s["k_grid"], Json({1, 5, 25}));
  EXPECT_EQ(s["n_runs"], 2);
  const Json& rt = s["pfl_saa"]["log10_normalized_runtime"];
  EXPECT_DOUBLE_EQ(rt["1"].get<double>(), 0.0);
  EXPECT_NEAR(rt["5"].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(rt["25"].get<double>(), 2.0, 1e-12);
  EXPECT_DOUBLE_EQ(s["pfl_saa"]["rel_pregret"]["1"].get<double>(), 3.5);
  std::set<std::string> keys;
  for (const auto& [k, v] : s["sfge"]["rel_pregret"].items()) {
    keys.insert(k);
    EXPECT_DOUBLE_EQ(v.get<double>(), 2.0);
  }
  EXPECT_EQ(keys, (std::set<std::string>{"1", "5", "25"}));
  EXPECT_NEAR(s["sfge"]["log10_normalized_runtime"]["5"].get<double>(),
              std::log10(0.0015 / 0.015), 1e-12);
  EXPECT_DOUBLE_EQ(s["pfl"]["rel_pregret"]["25"].get<double>(), 4.0);

  cells[1].points.pop_back();
  EXPECT_THROW(EmitPlotdata(cells), DflError);
}

TEST(ExperimentTest, SaaCellJsonRoundTrip) {
  SaaCell cell;
  cell.benchmark = "wsmc";
  cell.rho = 5;
  cell.dataset_seed = 3;
  cell.split_seed = 4;
  cell.points = {{1, 0.5, 0.001, 0}, {10, 0.25, 0.01, 2}};
  cell.pfl_rel_pregret = 0.7;
  cell.sfge_rel_pregret = 0.3;
  cell.sfge_inference_time_s = 1e-4;
  const SaaCell back = SaaCellFromJson(Json::parse(ToJson(cell).dump()));
  EXPECT_EQ(back.benchmark, cell.benchmark);
  EXPECT_EQ(back.rho, cell.rho);
  EXPECT_EQ(back.dataset_seed, cell.dataset_seed);
  ASSERT_EQ(back.points.size(), 2u);
  EXPECT_EQ(back.points[1].k, 10);
  EXPECT_EQ(back.points[1].time_limit_hits, 2);
  EXPECT_EQ(back.points[1].rel_pregret, 0.25);
  EXPECT_EQ(back.sfge_inference_time_s, cell.sfge_inference_time_s);
}

TEST(ExperimentTest, ConfigParsingAndPresets) {
  for (const std::string& name : PresetNames()) {
    const ExperimentConfig c = DeskPreset(name);
    EXPECT_NO_THROW(c.Validate()) << name;
    EXPECT_EQ(c.benchmark, name);
  }
  EXPECT_THROW(DeskPreset("tsp"), DflError);
  const ExperimentConfig c = ExperimentConfigFromJson(
      Json{{"benchmark", "wsmc"}, {"rho_grid", {2.0}}, {"seed", 9},
           {"train", {{"patience", 2}}}});
  EXPECT_EQ(c.kind, ProblemKind::kWsmc);
  EXPECT_EQ(c.rho_grid, std::vector<double>{2.0});
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.train.patience, 2);
  EXPECT_EQ(c.gen.n_sets, 15);
  const ExperimentConfig back = ExperimentConfigFromJson(ToJson(c));
  EXPECT_EQ(ToJson(back), ToJson(c));
  const ExperimentConfig big =
      ExperimentConfigFromJson(Json{{"benchmark", "kp_weights"}}, true);
  EXPECT_EQ(big.gen.n_items, 50);
  EXPECT_EQ(big.saa_k_grid.back(), 100);
  EXPECT_THROW(ExperimentConfigFromJson(Json{{"bogus", 1}}), DflError);
  EXPECT_THROW(ExperimentConfigFromJson(Json{{"methods", {"sgd"}}}), DflError);
  EXPECT_THROW(ExperimentConfigFromJson(Json{{"n_splits", "two"}}), DflError);
  EXPECT_THROW(ExperimentConfigFromJson(Json{{"rho_grid", Json::array()}}),
               DflError);
}

std::set<std::string> Keys(const Json& j) {
  std::set<std::string> out;
  for (const auto& [k, v] : j.items()) out.insert(k);
  return out;
}

TEST(ExperimentTest, ShippedSchemaCoversEveryConfigKey) {
  const Json schema = Json::parse(
      ReadFile(std::string(DFL_SOURCE_DIR) + "/docs/config.schema.json"));
  ExperimentConfig c = DeskPreset("kp_weights");
  c.gen.target_range = std::make_pair(1.0, 2.0);
  c.gen.capacity = 3.0;
  c.train.grad_clip = 1.0;
  const Json j = ToJson(c);
  EXPECT_EQ(Keys(schema["properties"]), Keys(j));
  EXPECT_EQ(Keys(schema["$defs"]["gen"]["properties"]), Keys(j["gen"]));
  EXPECT_EQ(Keys(schema["$defs"]["train"]["properties"]), Keys(j["train"]));
  std::vector<std::string> names;
  for (const auto& n : schema["properties"]["benchmark"]["enum"]) {
    names.push_back(n.get<std::string>());
  }
  EXPECT_EQ(names, PresetNames());
}

TEST(ExperimentTest, SeedsAreDistinctPerIndex) {
  EXPECT_NE(DatasetSeed(0, 0), DatasetSeed(0, 1));
  EXPECT_NE(DatasetSeed(0, 0), SplitSeed(0, 0));
  EXPECT_NE(DatasetSeed(0, 0), DatasetSeed(1, 0));
  EXPECT_EQ(SplitSeed(4, 2), SplitSeed(4, 2));
}

TEST(ExperimentTest, RunCellIsBitReproducible) {
  const ExperimentConfig c = TinyConfig("kp_weights");
  const CellOutput a =
      RunCell(c, Method::kSfge, 5.0, DatasetSeed(c.seed, 0), SplitSeed(c.seed, 0));
  const CellOutput b =
      RunCell(c, Method::kSfge, 5.0, DatasetSeed(c.seed, 0), SplitSeed(c.seed, 0));
  ASSERT_TRUE(a.record.ok()) << a.record.status;
  EXPECT_TRUE(SameRecord(a.record, b.record));
  ASSERT_TRUE(a.checkpoint && b.checkpoint);
  EXPECT_EQ(ToJson(*a.checkpoint).dump(), ToJson(*b.checkpoint).dump());
  const CellOutput other =
      RunCell(c, Method::kSfge, 5.0, DatasetSeed(c.seed, 1), SplitSeed(c.seed, 0));
  EXPECT_FALSE(SameRecord(a.record, other.record));
}

TEST(ExperimentTest, IneligibleCellIsRecordedAsFailed) {
  const ExperimentConfig c = TinyConfig("kp_weights");
  const CellOutput out = RunCell(c, Method::kSfgeMap, 5.0, 1, 2);
  EXPECT_FALSE(out.record.ok());
  EXPECT_EQ(out.record.status.rfind("failed:", 0), 0u);
  EXPECT_FALSE(out.checkpoint.has_value());
  EXPECT_TRUE(std::isnan(out.record.rel_pregret));
}

TEST(ExperimentTest, SweepEmitsOneRowPerCellInOrder) {
  ExperimentConfig c = TinyConfig("kp_fractional");
  c.rho_grid = {0.0, 1.0};
  int callbacks = 0;
  const auto records =
      RunSweep(c, [&](const RunRecord&) { ++callbacks; });
  const std::size_t expected =
      c.rho_grid.size() * c.methods.size() * c.n_datasets * c.n_splits;
  ASSERT_EQ(records.size(), expected);
  EXPECT_EQ(callbacks, static_cast<int>(expected));
  EXPECT_EQ(records.front().rho, 0.0);
  EXPECT_EQ(records.back().rho, 1.0);
  EXPECT_EQ(records.front().method, "sfge");
  for (const RunRecord& r : records) EXPECT_TRUE(r.ok()) << r.status;
  c.workers = 1;
  const auto serial = RunSweep(c);
  for (std::size_t i = 0; i < records.size(); ++i) {
    EXPECT_TRUE(SameRecord(records[i], serial[i]));
  }
}

TEST(ExperimentTest, SaaCellProducesOnePointPerK) {
  ExperimentConfig c = TinyConfig("wsmc");
  c.gen.n_sets = 6;
  c.saa_k_grid = {1, 3};
  const SaaCell cell = RunSaaCell(c, 5.0, 1, 2);
  ASSERT_EQ(cell.points.size(), 2u);
  EXPECT_EQ(cell.points[0].k, 1);
  EXPECT_EQ(cell.points[1].k, 3);
  for (const SaaPoint& p : cell.points) {
    EXPECT_GE(p.rel_pregret, -1e-12);
    EXPECT_GT(p.inference_time_s, 0.0);
  }
  EXPECT_GE(cell.sfge_rel_pregret, -1e-12);
}

}  // namespace
}  // namespace dfl
