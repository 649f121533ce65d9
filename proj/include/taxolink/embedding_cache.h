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

#ifndef TAXOLINK_EMBEDDING_CACHE_H_
#define TAXOLINK_EMBEDDING_CACHE_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "taxolink/embedding.h"

namespace taxolink {

// On-disk layout, all integers little-endian:
//
//   "TXLK" u16 version(=1) u8 normalized u32 dim u64 count
//   count x { u32 id_len, id bytes (UTF-8), u8 entity_kind,
//             u8 field_kind, u16 alt_index, dim x f32 }
struct EmbeddingCache {
  bool normalized = false;
  uint32_t dim = 0;
  std::vector<EmbeddingRecord> records;

  bool operator==(const EmbeddingCache &other) const = default;
};

inline constexpr char kCacheMagic[4] = {'T', 'X', 'L', 'K'};
inline constexpr uint16_t kCacheVersion = 1;

// Wraps records into a cache, taking dim from the first record. Throws
// std::invalid_argument when dims disagree.
EmbeddingCache MakeCache(std::vector<EmbeddingRecord> records,
                         bool normalized);

std::string SerializeCache(const EmbeddingCache &cache);
EmbeddingCache DeserializeCache(const std::string &bytes);

// Writes through a temporary file and renames, so readers never observe a
// partial cache.
void SaveCache(const EmbeddingCache &cache, const std::filesystem::path &path);
EmbeddingCache LoadCache(const std::filesystem::path &path);

}  // namespace taxolink

#endif  // TAXOLINK_EMBEDDING_CACHE_H_
