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

// JSON formats: single instances, JSON-lines datasets, and model
// checkpoints. Parsing failures throw ConfigError.

#ifndef DFL_SERIALIZATION_H_
#define DFL_SERIALIZATION_H_

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "dfl/datagen.h"
#include "dfl/predictor.h"
#include "dfl/problems.h"
#include "dfl/trainer.h"

namespace dfl {

using Json = nlohmann::json;

Json ToJson(const StaticData& data);
StaticData StaticDataFromJson(const Json& j);

// Missing keys keep their defaults; unknown keys are rejected.
Json ToJson(const GenConfig& config);
GenConfig GenConfigFromJson(const Json& j, GenConfig base = {});

Json ToJson(const TrainConfig& config);
TrainConfig TrainConfigFromJson(const Json& j, TrainConfig base = {});

Json ToJson(const Mapping& mapping);
Mapping MappingFromJson(const Json& j);

// {kind, static_data, rho, x, y}
struct InstanceFile {
  ProblemKind kind = ProblemKind::kKpValues;
  StaticData static_data;
  double rho = 0.0;
  Instance instance;
};
Json ToJson(const InstanceFile& file);
InstanceFile InstanceFileFromJson(const Json& j);

// First line: header {"format", "kind", "seed", "gen_meta": {config,
// mapping}, "static_data", "split"}; then one {"x", "y"} object per line.
std::string SerializeDataset(const Dataset& dataset);
Dataset ParseDataset(std::string_view text);
void WriteDataset(const Dataset& dataset, const std::string& path);
Dataset ReadDataset(const std::string& path);

// FNV-1a 64-bit hash of the serialized dataset, as 16 hex digits.
std::string DatasetFingerprint(const Dataset& dataset);

struct Checkpoint {
  GaussianPredictor model;
  Method method = Method::kSfge;
  TrainConfig config;
  std::string dataset_fingerprint;
};
Json ToJson(const Checkpoint& checkpoint);
Checkpoint CheckpointFromJson(const Json& j);

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::string_view contents);

}  // namespace dfl

#endif  // DFL_SERIALIZATION_H_
