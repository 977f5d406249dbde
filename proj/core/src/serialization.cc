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

#include "dfl/serialization.h"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include "dfl/errors.h"

namespace dfl {
namespace {

constexpr std::string_view kDatasetFormat = "dfl-dataset-v1";
constexpr std::string_view kCheckpointFormat = "dfl-checkpoint-v1";

void RejectUnknownKeys(const Json& j, std::initializer_list<const char*> keys,
                       std::string_view what) {
  if (!j.is_object()) {
    Fail(ErrorCode::kConfigError, std::string(what) + " must be an object");
  }
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : keys) known |= key == k;
    if (!known) {
      Fail(ErrorCode::kConfigError,
           "unknown key '" + key + "' in " + std::string(what));
    }
  }
}

template <typename T>
void ReadOptional(const Json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kConfigError,
         std::string("bad value for '") + key + "': " + e.what());
  }
}

template <typename T>
T ReadRequired(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    Fail(ErrorCode::kConfigError, std::string("missing key '") + key + "'");
  }
  T out{};
  ReadOptional(j, key, out);
  return out;
}

ProblemKind KindFromJson(const Json& j) {
  const auto name = ReadRequired<std::string>(j, "kind");
  const auto kind = ParseProblemKind(name);
  if (!kind) Fail(ErrorCode::kConfigError, "unknown problem kind " + name);
  return *kind;
}

Json InstanceLine(const Instance& inst) {
  return Json{{"x", inst.x}, {"y", inst.y}};
}

}  // namespace

Json ToJson(const StaticData& data) {
  return Json{{"num_items", data.num_items},
              {"values", data.values},
              {"weights", data.weights},
              {"capacity", data.capacity},
              {"costs", data.costs},
              {"availability", data.availability}};
}

StaticData StaticDataFromJson(const Json& j) {
  RejectUnknownKeys(
      j, {"num_items", "values", "weights", "capacity", "costs", "availability"},
      "static_data");
  StaticData data;
  data.num_items = ReadRequired<int>(j, "num_items");
  ReadOptional(j, "values", data.values);
  ReadOptional(j, "weights", data.weights);
  ReadOptional(j, "capacity", data.capacity);
  ReadOptional(j, "costs", data.costs);
  ReadOptional(j, "availability", data.availability);
  return data;
}

Json ToJson(const GenConfig& config) {
  Json j{{"p", config.p},
         {"deg", config.deg},
         {"noise_halfwidth", config.noise_halfwidth},
         {"n_instances", config.n_instances},
         {"n_items", config.n_items},
         {"n_sets", config.n_sets},
         {"density", config.density},
         {"capacity_fraction", config.capacity_fraction},
         {"probe_samples", config.probe_samples}};
  if (config.target_range) {
    j["target_range"] = {config.target_range->first,
                         config.target_range->second};
  }
  if (config.capacity) j["capacity"] = *config.capacity;
  return j;
}

GenConfig GenConfigFromJson(const Json& j, GenConfig base) {
  RejectUnknownKeys(j,
                    {"p", "deg", "noise_halfwidth", "n_instances", "n_items",
                     "n_sets", "density", "capacity_fraction",
                     "probe_samples", "target_range", "capacity"},
                    "gen");
  ReadOptional(j, "p", base.p);
  ReadOptional(j, "deg", base.deg);
  ReadOptional(j, "noise_halfwidth", base.noise_halfwidth);
  ReadOptional(j, "n_instances", base.n_instances);
  ReadOptional(j, "n_items", base.n_items);
  ReadOptional(j, "n_sets", base.n_sets);
  ReadOptional(j, "density", base.density);
  ReadOptional(j, "capacity_fraction", base.capacity_fraction);
  ReadOptional(j, "probe_samples", base.probe_samples);
  if (j.contains("target_range")) {
    std::vector<double> range;
    ReadOptional(j, "target_range", range);
    if (range.size() != 2) {
      Fail(ErrorCode::kConfigError, "target_range needs two numbers");
    }
    base.target_range = std::make_pair(range[0], range[1]);
  }
  if (j.contains("capacity")) {
    double c = 0.0;
    ReadOptional(j, "capacity", c);
    base.capacity = c;
  }
  return base;
}

Json ToJson(const TrainConfig& config) {
  Json j{{"lr", config.lr},
         {"batch_size", config.batch_size},
         {"samples", config.samples},
         {"max_epochs", config.max_epochs},
         {"patience", config.patience},
         {"standardize_regret", config.standardize_regret},
         {"eps_std", config.eps_std},
         {"beta1", config.beta1},
         {"beta2", config.beta2},
         {"adam_eps", config.adam_eps},
         {"seed", config.seed},
         {"target_scaling", config.target_scaling}};
  if (config.grad_clip) j["grad_clip"] = *config.grad_clip;
  return j;
}

TrainConfig TrainConfigFromJson(const Json& j, TrainConfig base) {
  RejectUnknownKeys(j,
                    {"lr", "batch_size", "samples", "max_epochs", "patience",
                     "standardize_regret", "eps_std", "beta1", "beta2",
                     "adam_eps", "seed", "grad_clip", "target_scaling"},
                    "train");
  ReadOptional(j, "lr", base.lr);
  ReadOptional(j, "batch_size", base.batch_size);
  ReadOptional(j, "samples", base.samples);
  ReadOptional(j, "max_epochs", base.max_epochs);
  ReadOptional(j, "patience", base.patience);
  ReadOptional(j, "standardize_regret", base.standardize_regret);
  ReadOptional(j, "eps_std", base.eps_std);
  ReadOptional(j, "beta1", base.beta1);
  ReadOptional(j, "beta2", base.beta2);
  ReadOptional(j, "adam_eps", base.adam_eps);
  ReadOptional(j, "seed", base.seed);
  ReadOptional(j, "target_scaling", base.target_scaling);
  if (j.contains("grad_clip")) {
    double clip = 0.0;
    ReadOptional(j, "grad_clip", clip);
    base.grad_clip = clip;
  }
  return base;
}

Json ToJson(const Mapping& mapping) {
  std::vector<std::vector<int>> b(mapping.b.rows(),
                                  std::vector<int>(mapping.b.cols()));
  for (Eigen::Index r = 0; r < mapping.b.rows(); ++r) {
    for (Eigen::Index c = 0; c < mapping.b.cols(); ++c) {
      b[r][c] = mapping.b(r, c) != 0.0 ? 1 : 0;
    }
  }
  return Json{{"B", b},
              {"deg", mapping.deg},
              {"base_min", mapping.base_min},
              {"base_max", mapping.base_max},
              {"lo", mapping.lo},
              {"hi", mapping.hi},
              {"rescale", mapping.rescale},
              {"probe_mean", mapping.probe_mean}};
}

Mapping MappingFromJson(const Json& j) {
  Mapping mapping;
  const auto b = ReadRequired<std::vector<std::vector<int>>>(j, "B");
  const Eigen::Index rows = static_cast<Eigen::Index>(b.size());
  const Eigen::Index cols =
      rows > 0 ? static_cast<Eigen::Index>(b[0].size()) : 0;
  mapping.b.resize(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(b[r].size()) != cols) {
      Fail(ErrorCode::kConfigError, "ragged mapping matrix");
    }
    for (Eigen::Index c = 0; c < cols; ++c) mapping.b(r, c) = b[r][c];
  }
  mapping.deg = ReadRequired<int>(j, "deg");
  mapping.base_min = ReadRequired<double>(j, "base_min");
  mapping.base_max = ReadRequired<double>(j, "base_max");
  mapping.lo = ReadRequired<double>(j, "lo");
  mapping.hi = ReadRequired<double>(j, "hi");
  mapping.rescale = ReadRequired<bool>(j, "rescale");
  ReadOptional(j, "probe_mean", mapping.probe_mean);
  return mapping;
}

Json ToJson(const InstanceFile& file) {
  return Json{{"kind", ProblemKindName(file.kind)},
              {"static_data", ToJson(file.static_data)},
              {"rho", file.rho},
              {"x", file.instance.x},
              {"y", file.instance.y}};
}

InstanceFile InstanceFileFromJson(const Json& j) {
  RejectUnknownKeys(j, {"kind", "static_data", "rho", "x", "y"}, "instance");
  InstanceFile file;
  file.kind = KindFromJson(j);
  file.static_data = StaticDataFromJson(ReadRequired<Json>(j, "static_data"));
  file.rho = ReadRequired<double>(j, "rho");
  file.instance.x = ReadRequired<std::vector<double>>(j, "x");
  file.instance.y = ReadRequired<std::vector<double>>(j, "y");
  return file;
}

std::string SerializeDataset(const Dataset& dataset) {
  Json header{{"format", kDatasetFormat},
              {"kind", ProblemKindName(dataset.kind)},
              {"seed", dataset.seed},
              {"gen_meta",
               {{"config", ToJson(dataset.config)},
                {"mapping", ToJson(dataset.mapping)}}},
              {"static_data", ToJson(dataset.static_data)},
              {"split",
               {{"train", dataset.split.train},
                {"val", dataset.split.val},
                {"test", dataset.split.test}}}};
  std::string out = header.dump();
  out += '\n';
  for (const Instance& inst : dataset.instances) {
    out += InstanceLine(inst).dump();
    out += '\n';
  }
  return out;
}

Dataset ParseDataset(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) Fail(ErrorCode::kConfigError, "empty dataset");
  Json header;
  try {
    header = Json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kConfigError, std::string("bad dataset header: ") +
                                      e.what());
  }
  if (ReadRequired<std::string>(header, "format") != kDatasetFormat) {
    Fail(ErrorCode::kConfigError, "unsupported dataset format");
  }
  Dataset ds;
  ds.kind = KindFromJson(header);
  ds.seed = ReadRequired<std::uint64_t>(header, "seed");
  const Json meta = ReadRequired<Json>(header, "gen_meta");
  ds.config = GenConfigFromJson(ReadRequired<Json>(meta, "config"));
  ds.mapping = MappingFromJson(ReadRequired<Json>(meta, "mapping"));
  ds.static_data = StaticDataFromJson(ReadRequired<Json>(header, "static_data"));
  const Json split = ReadRequired<Json>(header, "split");
  ds.split.train = ReadRequired<std::vector<int>>(split, "train");
  ds.split.val = ReadRequired<std::vector<int>>(split, "val");
  ds.split.test = ReadRequired<std::vector<int>>(split, "test");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      Fail(ErrorCode::kConfigError, std::string("bad dataset line: ") +
                                        e.what());
    }
    Instance inst;
    inst.x = ReadRequired<std::vector<double>>(j, "x");
    inst.y = ReadRequired<std::vector<double>>(j, "y");
    ds.instances.push_back(std::move(inst));
  }
  const int n = static_cast<int>(ds.instances.size());
  for (const auto* part : {&ds.split.train, &ds.split.val, &ds.split.test}) {
    for (int idx : *part) {
      if (idx < 0 || idx >= n) {
        Fail(ErrorCode::kConfigError, "split index out of range");
      }
    }
  }
  return ds;
}

void WriteDataset(const Dataset& dataset, const std::string& path) {
  WriteFile(path, SerializeDataset(dataset));
}

Dataset ReadDataset(const std::string& path) {
  return ParseDataset(ReadFile(path));
}

std::string DatasetFingerprint(const Dataset& dataset) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : SerializeDataset(dataset)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

Json ToJson(const Checkpoint& checkpoint) {
  const GaussianPredictor& m = checkpoint.model;
  std::vector<double> w;
  w.reserve(static_cast<std::size_t>(m.w.size()));
  for (Eigen::Index r = 0; r < m.w.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.w.cols(); ++c) w.push_back(m.w(r, c));
  }
  return Json{{"format", kCheckpointFormat},
              {"output_dim", m.output_dim()},
              {"input_dim", m.input_dim()},
              {"W", w},
              {"b", ToStd(m.b)},
              {"log_sigma", ToStd(m.log_sigma)},
              {"sigma_floor", m.sigma_floor},
              {"target_shift", ToStd(m.target_shift)},
              {"target_scale", ToStd(m.target_scale)},
              {"method", MethodName(checkpoint.method)},
              {"config", ToJson(checkpoint.config)},
              {"dataset_fingerprint", checkpoint.dataset_fingerprint}};
}

Checkpoint CheckpointFromJson(const Json& j) {
  if (ReadRequired<std::string>(j, "format") != kCheckpointFormat) {
    Fail(ErrorCode::kConfigError, "unsupported checkpoint format");
  }
  Checkpoint cp;
  const int d = ReadRequired<int>(j, "output_dim");
  const int p = ReadRequired<int>(j, "input_dim");
  const auto w = ReadRequired<std::vector<double>>(j, "W");
  const auto b = ReadRequired<std::vector<double>>(j, "b");
  const auto ls = ReadRequired<std::vector<double>>(j, "log_sigma");
  if (d < 0 || p < 0 || w.size() != std::size_t(d) * p ||
      b.size() != std::size_t(d) || ls.size() != std::size_t(d)) {
    Fail(ErrorCode::kConfigError, "checkpoint shape mismatch");
  }
  cp.model.w.resize(d, p);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < p; ++c) cp.model.w(r, c) = w[std::size_t(r) * p + c];
  }
  cp.model.b = ToEigen(b);
  cp.model.log_sigma = ToEigen(ls);
  cp.model.sigma_floor = ReadRequired<double>(j, "sigma_floor");
  const auto shift = ReadRequired<std::vector<double>>(j, "target_shift");
  const auto scale = ReadRequired<std::vector<double>>(j, "target_scale");
  if (shift.size() != std::size_t(d) || scale.size() != std::size_t(d)) {
    Fail(ErrorCode::kConfigError, "checkpoint shape mismatch");
  }
  cp.model.target_shift = ToEigen(shift);
  cp.model.target_scale = ToEigen(scale);
  const auto method = ParseMethod(ReadRequired<std::string>(j, "method"));
  if (!method) Fail(ErrorCode::kConfigError, "unknown method in checkpoint");
  cp.method = *method;
  cp.config = TrainConfigFromJson(ReadRequired<Json>(j, "config"));
  cp.dataset_fingerprint = ReadRequired<std::string>(j, "dataset_fingerprint");
  return cp;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kConfigError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kConfigError, "cannot write " + path);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) Fail(ErrorCode::kConfigError, "failed writing " + path);
}

}  // namespace dfl
