// Copyright 2026 The Taxolink Authors.
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

#ifndef TAXOLINK_CONFIG_H_
#define TAXOLINK_CONFIG_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "taxolink/embedding.h"
#include "taxolink/taxonomy.h"

namespace taxolink {

// Settings for one run. Read from a flat `key = value` file:
//
//   # comment
//   occupations = "esco/occupations_en.csv"
//   skills = esco/skills_en.csv
//   cache_dir = cache
//   strategy = s3
//   k = 10
//   provider = replay:vectors.jsonl
//   labeler = gold:annotations.jsonl
//
// Relative paths, including the path part of replay: and gold: specs, are
// taken relative to the directory of the config file.
struct RunConfig {
  std::map<EntityKind, std::filesystem::path> references;
  std::filesystem::path cache_dir = ".";
  EmbeddingStrategy strategy = EmbeddingStrategy::kPreferredLabel;
  size_t k = 10;
  std::string provider;
  std::string labeler;
  std::optional<EntityKind> kind;
  size_t batch_size = 64;
  std::optional<std::filesystem::path> documents;
  std::optional<std::filesystem::path> gold;

  // Reference sets to work on: the selected kind alone, else every
  // configured one in kind order.
  std::vector<EntityKind> SelectedKinds() const;
  std::filesystem::path CachePath(EntityKind kind) const;
};

// Parses config text. Unknown keys, malformed lines and bad values throw
// std::invalid_argument naming the line.
RunConfig ParseConfig(std::string_view text,
                      const std::filesystem::path &base_dir);
RunConfig LoadConfig(const std::filesystem::path &path);

// Applies one key as if it were read from the file. Used for flag
// overrides; relative paths resolve against `base_dir`.
void SetConfigValue(RunConfig &config, std::string_view key,
                    std::string_view value,
                    const std::filesystem::path &base_dir);

// True for provider or labeler specs that name a bridge service rather
// than a local replay or hashing source.
bool IsServiceSpec(std::string_view spec);

// Replaces service addresses with `bridge_addr` when it is set.
void ApplyBridgeOverride(RunConfig &config,
                         const std::optional<std::string> &bridge_addr);

// Throws IngestError when a reference file is missing and
// std::invalid_argument for any other missing file or when k is 0.
void ValidateConfig(const RunConfig &config);

}  // namespace taxolink

#endif  // TAXOLINK_CONFIG_H_
