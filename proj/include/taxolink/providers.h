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

#ifndef TAXOLINK_PROVIDERS_H_
#define TAXOLINK_PROVIDERS_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "taxolink/embedding.h"
#include "taxolink/line_channel.h"

namespace taxolink {

// Replays vectors from a fixed text -> vector table. Unknown texts are a
// ProviderError. Safe for concurrent use.
class ReplayProvider : public EmbeddingProvider {
 public:
  explicit ReplayProvider(
      std::unordered_map<std::string, std::vector<float>> table);

  // Reads JSON Lines of the form {"text": "...", "vector": [...]}.
  static ReplayProvider FromFile(const std::filesystem::path &path);

  size_t dim() const override { return dim_; }
  size_t size() const { return table_.size(); }

 protected:
  std::vector<EmbeddingVector> EmbedBatch(
      const std::vector<std::string> &texts) override;

 private:
  std::unordered_map<std::string, EmbeddingVector> table_;
  size_t dim_ = 0;
};

// Deterministic random-indexing encoder: every lower-cased alphanumeric
// word is hashed to a fixed pseudo-random direction and a text's vector is
// the sum over its words. Texts sharing words get similar vectors, and
// the output depends only on (text, dim, seed). Safe for concurrent use.
class HashingProvider : public EmbeddingProvider {
 public:
  explicit HashingProvider(size_t dim = 64, uint64_t seed = 0);

  size_t dim() const override { return dim_; }

 protected:
  std::vector<EmbeddingVector> EmbedBatch(
      const std::vector<std::string> &texts) override;

 private:
  EmbeddingVector EmbedOne(std::string_view text) const;

  size_t dim_;
  uint64_t seed_;
};

// Client for the embedding service protocol:
//
//   -> {"op":"embed","texts":[...]}
//   <- {"vectors":[[...],...],"dim":n}     or  {"error":"..."}
//
// The first response fixes the dimension; later responses must agree.
class ServiceProvider : public EmbeddingProvider {
 public:
  explicit ServiceProvider(std::unique_ptr<LineChannel> channel,
                           size_t expected_dim = 0);

  size_t dim() const override { return dim_; }

 protected:
  std::vector<EmbeddingVector> EmbedBatch(
      const std::vector<std::string> &texts) override;

 private:
  std::unique_ptr<LineChannel> channel_;
  size_t dim_;
};

// Builds a provider from a spec string:
//
//   replay:PATH            ReplayProvider over a JSON Lines table
//   hash:DIM[:SEED]        HashingProvider
//   tcp://HOST:PORT | stdio:COMMAND | HOST:PORT   ServiceProvider
//
// Throws ProviderError when the provider string is malformed or the service is
// unreachable.
std::unique_ptr<EmbeddingProvider> MakeProvider(std::string_view spec);

}  // namespace taxolink

#endif  // TAXOLINK_PROVIDERS_H_
