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

#include "dfl/experiment.h"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "dfl/errors.h"
#include "dfl/rng.h"

namespace dfl {
namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool SameBits(double a, double b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

std::uint64_t TrainSeed(const ExperimentConfig& config,
                        std::uint64_t dataset_seed, std::uint64_t split_seed) {
  return DeriveSeed(config.seed, {kStreamInit, dataset_seed, split_seed});
}

std::string FormatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double ParseDouble(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    Fail(ErrorCode::kConfigError, "bad number '" + s + "' in CSV");
  }
  return v;
}

std::uint64_t ParseUint(const std::string& s) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size()) {
    Fail(ErrorCode::kConfigError, "bad integer '" + s + "' in CSV");
  }
  return v;
}

std::string CsvSafe(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<Method> MethodsFromNames(const std::vector<std::string>& names) {
  std::vector<Method> out;
  for (const auto& n : names) {
    const auto m = ParseMethod(n);
    if (!m) Fail(ErrorCode::kConfigError, "unknown method " + n);
    out.push_back(*m);
  }
  return out;
}

struct Prepared {
  Dataset dataset;
  std::optional<ProblemSpec> problem;
};

Prepared Prepare(const ExperimentConfig& config, double rho,
                 std::uint64_t dataset_seed, std::uint64_t split_seed) {
  Prepared p;
  p.dataset = BuildDataset(config.gen, config.kind, dataset_seed);
  Resplit(p.dataset, split_seed);
  p.problem.emplace(MakeProblem(p.dataset, rho));
  return p;
}

}  // namespace

void ExperimentConfig::Validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) Fail(ErrorCode::kConfigError, what);
  };
  require(!methods.empty(), "methods must be non-empty");
  require(!rho_grid.empty(), "rho_grid must be non-empty");
  require(n_datasets >= 1 && n_splits >= 1,
          "n_datasets and n_splits must be >= 1");
  for (int k : saa_k_grid) require(k >= 1, "SAA scenario counts must be >= 1");
  require(saa_time_limit > 0.0, "saa_time_limit must be > 0");
  require(workers >= 0, "workers must be >= 0");
  gen.Validate();
  train.Validate();
}

std::vector<std::string> PresetNames() {
  return {"kp_values", "kp_quadratic", "kp_fractional",
          "kp_weights", "kp_capacity", "wsmc"};
}

ExperimentConfig DeskPreset(std::string_view benchmark) {
  const auto kind = ParseProblemKind(benchmark);
  if (!kind) {
    Fail(ErrorCode::kConfigError,
         "unknown benchmark " + std::string(benchmark));
  }
  ExperimentConfig c;
  c.benchmark = std::string(benchmark);
  c.kind = *kind;
  switch (*kind) {
    case ProblemKind::kKpValues:
      c.gen.n_items = 20;
      c.methods = {Method::kSpoPlus, Method::kSfge, Method::kSfgeMap,
                   Method::kPflMse};
      c.rho_grid = {0.0};
      break;
    case ProblemKind::kKpQuadratic:
      c.gen.n_items = 8;
      c.methods = {Method::kSfge, Method::kSfgeMap, Method::kPflMse};
      c.rho_grid = {0.0};
      break;
    case ProblemKind::kKpFractional:
      c.gen.n_items = 10;
      c.methods = {Method::kSfge, Method::kPflMse};
      c.rho_grid = {0.0, 1.0, 2.0};
      break;
    case ProblemKind::kKpWeights:
    case ProblemKind::kKpCapacity:
      c.gen.n_items = 20;
      c.methods = {Method::kSfge, Method::kPflNll};
      c.rho_grid = {5.0, 10.0, 20.0};
      break;
    case ProblemKind::kWsmc:
      c.gen.n_items = 5;
      c.gen.n_sets = 15;
      c.methods = {Method::kSfge, Method::kPflNll};
      c.rho_grid = {1.0, 5.0, 10.0};
      break;
  }
  return c;
}

void ApplyPaperScale(ExperimentConfig& config) {
  config.gen.n_instances = 1000;
  config.train.max_epochs = 1000;
  config.saa_k_grid = {1, 5, 10, 25, 50, 75, 100};
  switch (config.kind) {
    case ProblemKind::kKpValues:
    case ProblemKind::kKpWeights:
    case ProblemKind::kKpCapacity:
      config.gen.n_items = 50;
      break;
    case ProblemKind::kKpQuadratic:
      config.gen.n_items = 10;
      break;
    case ProblemKind::kKpFractional:
      config.gen.n_items = 10;
      break;
    case ProblemKind::kWsmc:
      config.gen.n_items = 10;
      config.gen.n_sets = 50;
      break;
  }
}

ExperimentConfig ExperimentConfigFromJson(const Json& j, bool paper_scale) {
  if (!j.is_object()) Fail(ErrorCode::kConfigError, "config must be an object");
  static const char* kKeys[] = {"benchmark", "gen", "train", "methods",
                                "rho_grid", "n_datasets", "n_splits",
                                "saa_k_grid", "saa_time_limit", "seed",
                                "output_dir", "workers"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(std::begin(kKeys), std::end(kKeys), key) ==
        std::end(kKeys)) {
      Fail(ErrorCode::kConfigError, "unknown key '" + key + "' in config");
    }
  }
  try {
    ExperimentConfig c =
        DeskPreset(j.value("benchmark", std::string("kp_weights")));
    if (paper_scale) ApplyPaperScale(c);
    if (j.contains("gen")) c.gen = GenConfigFromJson(j.at("gen"), c.gen);
    if (j.contains("train")) {
      c.train = TrainConfigFromJson(j.at("train"), c.train);
    }
    if (j.contains("methods")) {
      c.methods = MethodsFromNames(j.at("methods").get<std::vector<std::string>>());
    }
    if (j.contains("rho_grid")) {
      c.rho_grid = j.at("rho_grid").get<std::vector<double>>();
    }
    c.n_datasets = j.value("n_datasets", c.n_datasets);
    c.n_splits = j.value("n_splits", c.n_splits);
    if (j.contains("saa_k_grid")) {
      c.saa_k_grid = j.at("saa_k_grid").get<std::vector<int>>();
    }
    c.saa_time_limit = j.value("saa_time_limit", c.saa_time_limit);
    c.seed = j.value("seed", c.seed);
    c.output_dir = j.value("output_dir", c.output_dir);
    c.workers = j.value("workers", c.workers);
    c.Validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kConfigError, std::string("bad config: ") + e.what());
  }
}

Json ToJson(const ExperimentConfig& config) {
  std::vector<std::string> methods;
  for (Method m : config.methods) methods.emplace_back(MethodName(m));
  return Json{{"benchmark", config.benchmark},
              {"gen", ToJson(config.gen)},
              {"train", ToJson(config.train)},
              {"methods", methods},
              {"rho_grid", config.rho_grid},
              {"n_datasets", config.n_datasets},
              {"n_splits", config.n_splits},
              {"saa_k_grid", config.saa_k_grid},
              {"saa_time_limit", config.saa_time_limit},
              {"seed", config.seed},
              {"output_dir", config.output_dir},
              {"workers", config.workers}};
}

std::uint64_t DatasetSeed(std::uint64_t master_seed, int dataset_index) {
  return DeriveSeed(master_seed,
                    {kStreamDataset, static_cast<std::uint64_t>(dataset_index)});
}

std::uint64_t SplitSeed(std::uint64_t master_seed, int split_index) {
  return DeriveSeed(master_seed,
                    {kStreamSplit, static_cast<std::uint64_t>(split_index)});
}

bool SameRecord(const RunRecord& a, const RunRecord& b, bool include_timings) {
  const bool feas_same =
      a.feas_rel_pregret.has_value() == b.feas_rel_pregret.has_value() &&
      (!a.feas_rel_pregret ||
       SameBits(*a.feas_rel_pregret, *b.feas_rel_pregret));
  const bool base = a.benchmark == b.benchmark && a.method == b.method &&
                    SameBits(a.rho, b.rho) &&
                    a.dataset_seed == b.dataset_seed &&
                    a.split_seed == b.split_seed && a.status == b.status &&
                    SameBits(a.rel_pregret, b.rel_pregret) && feas_same &&
                    SameBits(a.infeas_ratio, b.infeas_ratio) &&
                    SameBits(a.mse, b.mse) && a.epochs == b.epochs;
  if (!include_timings) return base;
  return base && SameBits(a.train_time_s, b.train_time_s) &&
         SameBits(a.inference_time_s, b.inference_time_s);
}

TestEvaluation EvaluateModel(const ProblemSpec& problem,
                             const GaussianPredictor& model,
                             std::span<const Example> examples) {
  if (examples.empty()) Fail(ErrorCode::kEmptyInput, "empty test set");
  TestEvaluation eval;
  std::vector<std::vector<double>> preds, truths;
  double time_sum = 0.0;
  for (const Example& ex : examples) {
    const auto start = Clock::now();
    const std::vector<double> mu = ToStd(PredictMean(model, ex.x));
    const SolveResult first = RequireOptimal(problem.Solve(mu), "first-stage");
    time_sum += SecondsSince(start);
    eval.records.push_back(
        EvaluateDecision(problem, first.decision, ex.y, ex.full_info));
    preds.push_back(mu);
    truths.push_back(ex.y);
  }
  eval.summary = AggregateMetrics(eval.records, preds, truths);
  eval.inference_time_s = time_sum / static_cast<double>(examples.size());
  return eval;
}

CellOutput RunCell(const ExperimentConfig& config, Method method, double rho,
                   std::uint64_t dataset_seed, std::uint64_t split_seed) {
  CellOutput out;
  RunRecord& r = out.record;
  r.benchmark = config.benchmark;
  r.method = std::string(MethodName(method));
  r.rho = rho;
  r.dataset_seed = dataset_seed;
  r.split_seed = split_seed;
  try {
    Prepared p = Prepare(config, rho, dataset_seed, split_seed);
    TrainConfig tc = config.train;
    tc.seed = TrainSeed(config, dataset_seed, split_seed);
    TrainResult trained = Train(*p.problem, p.dataset, method, tc);
    const std::vector<Example> test =
        MakeExamples(*p.problem, p.dataset, p.dataset.split.test, true);
    const TestEvaluation eval = EvaluateModel(*p.problem, trained.model, test);
    r.rel_pregret = eval.summary.rel_pregret;
    r.feas_rel_pregret = eval.summary.feas_rel_pregret;
    r.infeas_ratio = eval.summary.infeas_ratio;
    r.mse = eval.summary.mse;
    r.epochs = trained.trace.epochs();
    r.train_time_s = trained.train_seconds;
    r.inference_time_s = eval.inference_time_s;
    out.checkpoint = Checkpoint{trained.model, method, tc,
                                DatasetFingerprint(p.dataset)};
  } catch (const DflError& e) {
    r.status = CsvSafe("failed:" + std::string(e.what()));
    r.rel_pregret = r.infeas_ratio = r.mse = std::nan("");
  }
  return out;
}

std::vector<RunRecord> RunSweep(
    const ExperimentConfig& config,
    const std::function<void(const RunRecord&)>& on_done) {
  config.Validate();
  struct Cell {
    Method method;
    double rho;
    std::uint64_t dataset_seed;
    std::uint64_t split_seed;
  };
  std::vector<Cell> cells;
  for (double rho : config.rho_grid) {
    for (Method m : config.methods) {
      for (int d = 0; d < config.n_datasets; ++d) {
        for (int s = 0; s < config.n_splits; ++s) {
          cells.push_back({m, rho, DatasetSeed(config.seed, d),
                           SplitSeed(config.seed, s)});
        }
      }
    }
  }
  std::vector<RunRecord> records(cells.size());
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      const Cell& c = cells[i];
      RunRecord rec =
          RunCell(config, c.method, c.rho, c.dataset_seed, c.split_seed)
              .record;
      std::lock_guard<std::mutex> lock(mu);
      records[i] = rec;
      if (on_done) on_done(rec);
    }
  };
  int workers = config.workers;
  if (workers == 0) {
    workers = std::max(1u, std::thread::hardware_concurrency());
  }
  workers = std::min<int>(workers, static_cast<int>(cells.size()));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return records;
}

std::vector<SaaPoint> RunSaaSweep(const ProblemSpec& problem,
                                  const GaussianPredictor& model,
                                  std::span<const Example> test,
                                  std::span<const int> k_grid,
                                  const BnBConfig& bnb, std::uint64_t seed) {
  if (test.empty() || k_grid.empty()) {
    Fail(ErrorCode::kEmptyInput, "SAA sweep needs test data and a K grid");
  }
  std::vector<SaaPoint> points;
  for (int k : k_grid) {
    SaaPoint point;
    point.k = k;
    double rel_sum = 0.0;
    double time_sum = 0.0;
    for (std::size_t i = 0; i < test.size(); ++i) {
      const auto start = Clock::now();
      Rng rng = MakeRng(seed, {kStreamScenario, i});
      ScenarioSet scenarios;
      for (int s = 0; s < k; ++s) {
        scenarios.scenarios.push_back(
            ToStd(SamplePrediction(model, test[i].x, rng)));
      }
      const SolveResult first = SaaExtensiveSolve(problem, scenarios, bnb);
      time_sum += SecondsSince(start);
      if (first.status == SolveStatus::kTimeLimit) ++point.time_limit_hits;
      rel_sum += RelativePostHocRegret(EvaluateDecision(
          problem, first.decision, test[i].y, test[i].full_info));
    }
    point.rel_pregret = rel_sum / static_cast<double>(test.size());
    point.inference_time_s = time_sum / static_cast<double>(test.size());
    points.push_back(point);
  }
  return points;
}

SaaCell RunSaaCell(const ExperimentConfig& config, double rho,
                   std::uint64_t dataset_seed, std::uint64_t split_seed) {
  Prepared p = Prepare(config, rho, dataset_seed, split_seed);
  TrainConfig tc = config.train;
  tc.seed = TrainSeed(config, dataset_seed, split_seed);
  const TrainResult pfl = Train(*p.problem, p.dataset, Method::kPflNll, tc);
  const TrainResult sfge = Train(*p.problem, p.dataset, Method::kSfge, tc);
  const std::vector<Example> test =
      MakeExamples(*p.problem, p.dataset, p.dataset.split.test, true);

  SaaCell cell;
  cell.benchmark = config.benchmark;
  cell.rho = rho;
  cell.dataset_seed = dataset_seed;
  cell.split_seed = split_seed;
  cell.pfl_rel_pregret =
      EvaluateModel(*p.problem, pfl.model, test).summary.rel_pregret;
  const TestEvaluation sfge_eval = EvaluateModel(*p.problem, sfge.model, test);
  cell.sfge_rel_pregret = sfge_eval.summary.rel_pregret;
  cell.sfge_inference_time_s = sfge_eval.inference_time_s;
  BnBConfig bnb;
  bnb.time_limit = config.saa_time_limit;
  cell.points = RunSaaSweep(*p.problem, pfl.model, test, config.saa_k_grid,
                            bnb, DeriveSeed(tc.seed, {kStreamScenario}));
  return cell;
}

Json ToJson(const SaaCell& cell) {
  Json points = Json::array();
  for (const SaaPoint& p : cell.points) {
    points.push_back({{"k", p.k},
                      {"rel_pregret", p.rel_pregret},
                      {"inference_time_s", p.inference_time_s},
                      {"time_limit_hits", p.time_limit_hits}});
  }
  return Json{{"benchmark", cell.benchmark},
              {"rho", cell.rho},
              {"dataset_seed", cell.dataset_seed},
              {"split_seed", cell.split_seed},
              {"pfl_rel_pregret", cell.pfl_rel_pregret},
              {"sfge_rel_pregret", cell.sfge_rel_pregret},
              {"sfge_inference_time_s", cell.sfge_inference_time_s},
              {"points", points}};
}

SaaCell SaaCellFromJson(const Json& j) {
  try {
    SaaCell cell;
    cell.benchmark = j.at("benchmark").get<std::string>();
    cell.rho = j.at("rho").get<double>();
    cell.dataset_seed = j.at("dataset_seed").get<std::uint64_t>();
    cell.split_seed = j.at("split_seed").get<std::uint64_t>();
    cell.pfl_rel_pregret = j.at("pfl_rel_pregret").get<double>();
    cell.sfge_rel_pregret = j.at("sfge_rel_pregret").get<double>();
    cell.sfge_inference_time_s = j.at("sfge_inference_time_s").get<double>();
    for (const Json& p : j.at("points")) {
      cell.points.push_back(SaaPoint{p.at("k").get<int>(),
                                     p.at("rel_pregret").get<double>(),
                                     p.at("inference_time_s").get<double>(),
                                     p.at("time_limit_hits").get<int>()});
    }
    return cell;
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kConfigError, std::string("bad SAA result: ") + e.what());
  }
}

std::vector<TableRow> AggregateTables(std::span<const RunRecord> records,
                                      double omit_threshold) {
  if (records.empty()) Fail(ErrorCode::kEmptyInput, "no run records");
  using Key = std::tuple<std::string, std::string, double>;
  std::map<Key, std::vector<const RunRecord*>> groups;
  std::vector<Key> order;
  for (const RunRecord& r : records) {
    if (!r.ok()) continue;
    Key key{r.benchmark, r.method, r.rho};
    if (!groups.contains(key)) order.push_back(key);
    groups[key].push_back(&r);
  }
  std::vector<TableRow> rows;
  auto emit = [&](const Key& key, const std::string& metric,
                  const std::vector<double>& values) {
    if (values.empty()) return;
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    rows.push_back(TableRow{std::get<0>(key), std::get<1>(key),
                            std::get<2>(key), metric, mean, sd,
                            static_cast<int>(values.size())});
  };
  for (const Key& key : order) {
    const auto& group = groups[key];
    std::vector<double> rel, feas, infeas, mse, epochs, train_t, infer_t;
    bool all_infeasible = true;
    for (const RunRecord* r : group) {
      rel.push_back(r->rel_pregret);
      if (r->feas_rel_pregret) feas.push_back(*r->feas_rel_pregret);
      infeas.push_back(r->infeas_ratio);
      mse.push_back(r->mse);
      epochs.push_back(r->epochs);
      train_t.push_back(r->train_time_s);
      infer_t.push_back(r->inference_time_s);
      all_infeasible &= r->infeas_ratio >= omit_threshold;
    }
    emit(key, "rel_pregret", rel);
    if (!all_infeasible) emit(key, "feas_rel_pregret", feas);
    emit(key, "infeas_ratio", infeas);
    emit(key, "mse", mse);
    emit(key, "epochs", epochs);
    emit(key, "train_time_s", train_t);
    emit(key, "inference_time_s", infer_t);
  }
  return rows;
}

std::string TablesToCsv(std::span<const TableRow> rows) {
  std::ostringstream out;
  out << "benchmark,method,rho,metric,mean,std,n\n";
  for (const TableRow& r : rows) {
    out << CsvSafe(r.benchmark) << ',' << CsvSafe(r.method) << ','
        << FormatDouble(r.rho) << ',' << r.metric << ','
        << FormatDouble(r.mean) << ',' << FormatDouble(r.std) << ',' << r.n
        << '\n';
  }
  return out.str();
}

namespace {

constexpr const char* kRecordHeader =
    "benchmark,method,rho,dataset_seed,split_seed,status,rel_pregret,"
    "feas_rel_pregret,infeas_ratio,mse,epochs,train_time_s,"
    "inference_time_s";

}  // namespace

std::string RunRecordsToCsv(std::span<const RunRecord> records) {
  std::ostringstream out;
  out << kRecordHeader << '\n';
  for (const RunRecord& r : records) {
    out << CsvSafe(r.benchmark) << ',' << CsvSafe(r.method) << ','
        << FormatDouble(r.rho) << ',' << r.dataset_seed << ','
        << r.split_seed << ',' << CsvSafe(r.status) << ','
        << FormatDouble(r.rel_pregret) << ','
        << (r.feas_rel_pregret ? FormatDouble(*r.feas_rel_pregret) : "")
        << ',' << FormatDouble(r.infeas_ratio) << ',' << FormatDouble(r.mse)
        << ',' << r.epochs << ',' << FormatDouble(r.train_time_s) << ','
        << FormatDouble(r.inference_time_s) << '\n';
  }
  return out.str();
}

std::vector<RunRecord> RunRecordsFromCsv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) Fail(ErrorCode::kEmptyInput, "empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kRecordHeader) {
    Fail(ErrorCode::kConfigError, "unexpected run-record CSV header");
  }
  std::vector<RunRecord> out;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto f = SplitCsvLine(line);
    if (f.size() != 13) {
      Fail(ErrorCode::kConfigError, "run-record CSV row has " +
                                        std::to_string(f.size()) + " fields");
    }
    RunRecord r;
    r.benchmark = f[0];
    r.method = f[1];
    r.rho = ParseDouble(f[2]);
    r.dataset_seed = ParseUint(f[3]);
    r.split_seed = ParseUint(f[4]);
    r.status = f[5];
    r.rel_pregret = ParseDouble(f[6]);
    if (!f[7].empty()) r.feas_rel_pregret = ParseDouble(f[7]);
    r.infeas_ratio = ParseDouble(f[8]);
    r.mse = ParseDouble(f[9]);
    r.epochs = static_cast<int>(ParseUint(f[10]));
    r.train_time_s = ParseDouble(f[11]);
    r.inference_time_s = ParseDouble(f[12]);
    out.push_back(std::move(r));
  }
  return out;
}

Json EmitPlotdata(std::span<const SaaCell> cells) {
  if (cells.empty()) Fail(ErrorCode::kEmptyInput, "no SAA results");
  std::map<double, std::vector<const SaaCell*>> by_rho;
  for (const SaaCell& c : cells) by_rho[c.rho].push_back(&c);
  Json series = Json::array();
  for (const auto& [rho, group] : by_rho) {
    const auto& first = group.front()->points;
    std::vector<int> k_grid;
    for (const SaaPoint& p : first) k_grid.push_back(p.k);
    std::vector<double> rel(k_grid.size(), 0.0), time(k_grid.size(), 0.0);
    double sfge_rel = 0.0, sfge_time = 0.0, pfl_rel = 0.0;
    for (const SaaCell* c : group) {
      if (c->points.size() != k_grid.size()) {
        Fail(ErrorCode::kConfigError, "SAA results use different K grids");
      }
      for (std::size_t i = 0; i < k_grid.size(); ++i) {
        if (c->points[i].k != k_grid[i]) {
          Fail(ErrorCode::kConfigError, "SAA results use different K grids");
        }
        rel[i] += c->points[i].rel_pregret;
        time[i] += c->points[i].inference_time_s;
      }
      sfge_rel += c->sfge_rel_pregret;
      sfge_time += c->sfge_inference_time_s;
      pfl_rel += c->pfl_rel_pregret;
    }
    const double n = static_cast<double>(group.size());
    // Runtimes are normalized by the K = 1 mean, or by the first K if the
    // grid does not contain 1.
    std::size_t anchor = 0;
    for (std::size_t i = 0; i < k_grid.size(); ++i) {
      if (k_grid[i] == 1) anchor = i;
    }
    const double base = time[anchor] / n;
    Json saa_rel = Json::object(), saa_rt = Json::object();
    Json sfge_rel_s = Json::object(), sfge_rt_s = Json::object();
    Json pfl_rel_s = Json::object();
    for (std::size_t i = 0; i < k_grid.size(); ++i) {
      const std::string k = std::to_string(k_grid[i]);
      saa_rel[k] = rel[i] / n;
      saa_rt[k] = std::log10((time[i] / n) / base);
      sfge_rel_s[k] = sfge_rel / n;
      sfge_rt_s[k] = std::log10((sfge_time / n) / base);
      pfl_rel_s[k] = pfl_rel / n;
    }
    series.push_back(
        {{"benchmark", group.front()->benchmark},
         {"rho", rho},
         {"n_runs", group.size()},
         {"k_grid", k_grid},
         {"pfl_saa",
          {{"rel_pregret", saa_rel}, {"log10_normalized_runtime", saa_rt}}},
         {"sfge",
          {{"rel_pregret", sfge_rel_s},
           {"log10_normalized_runtime", sfge_rt_s}}},
         {"pfl", {{"rel_pregret", pfl_rel_s}}}});
  }
  return Json{{"series", series}};
}

}  // namespace dfl
