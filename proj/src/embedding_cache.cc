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

#include "taxolink/embedding_cache.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "taxolink/errors.h"

namespace taxolink {
namespace {

class Writer {
 public:
  void Bytes(const void *data, size_t n) {
    out_.append(static_cast<const char *>(data), n);
  }
  template <typename T>
  void Le(T value) {
    for (size_t i = 0; i < sizeof(T); ++i) {
      out_.push_back(
          static_cast<char>((static_cast<uint64_t>(value) >> (8 * i)) & 0xff));
    }
  }
  std::string Take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(const std::string &in) : in_(in) {}

  void Need(size_t n, const char *what) const {
    if (in_.size() - pos_ < n) {
      throw FormatError(
          std::string("embedding cache truncated while reading ") + what);
    }
  }
  template <typename T>
  T Le(const char *what) {
    Need(sizeof(T), what);
    uint64_t v = 0;
    for (size_t i = 0; i < sizeof(T); ++i) {
      v |= static_cast<uint64_t>(static_cast<unsigned char>(in_[pos_ + i]))
           << (8 * i);
    }
    pos_ += sizeof(T);
    return static_cast<T>(v);
  }
  std::string Str(size_t n, const char *what) {
    Need(n, what);
    std::string s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool AtEnd() const { return pos_ == in_.size(); }
  size_t Remaining() const { return in_.size() - pos_; }

 private:
  const std::string &in_;
  size_t pos_ = 0;
};

}  // namespace

EmbeddingCache MakeCache(std::vector<EmbeddingRecord> records,
                         bool normalized) {
  EmbeddingCache cache;
  cache.normalized = normalized;
  if (!records.empty()) {
    cache.dim = static_cast<uint32_t>(records.front().vector.dim());
  }
  for (const EmbeddingRecord &r : records) {
    if (r.vector.dim() != cache.dim) {
      throw std::invalid_argument("record " + r.node_id + " has dim " +
                                  std::to_string(r.vector.dim()) +
                                  ", expected " + std::to_string(cache.dim));
    }
  }
  cache.records = std::move(records);
  return cache;
}

std::string SerializeCache(const EmbeddingCache &cache) {
  Writer w;
  w.Bytes(kCacheMagic, sizeof(kCacheMagic));
  w.Le<uint16_t>(kCacheVersion);
  w.Le<uint8_t>(cache.normalized ? 1 : 0);
  w.Le<uint32_t>(cache.dim);
  w.Le<uint64_t>(cache.records.size());
  for (const EmbeddingRecord &r : cache.records) {
    if (r.vector.dim() != cache.dim) {
      throw std::invalid_argument("record " + r.node_id + " has dim " +
                                  std::to_string(r.vector.dim()) +
                                  ", cache header says " +
                                  std::to_string(cache.dim));
    }
    w.Le<uint32_t>(static_cast<uint32_t>(r.node_id.size()));
    w.Bytes(r.node_id.data(), r.node_id.size());
    w.Le<uint8_t>(static_cast<uint8_t>(r.kind));
    w.Le<uint8_t>(static_cast<uint8_t>(r.field.kind));
    w.Le<uint16_t>(r.field.alt_index);
    for (float v : r.vector.values()) {
      w.Le<uint32_t>(std::bit_cast<uint32_t>(v));
    }
  }
  return w.Take();
}

EmbeddingCache DeserializeCache(const std::string &bytes) {
  Reader r(bytes);
  std::string magic = r.Str(4, "magic");
  if (std::memcmp(magic.data(), kCacheMagic, 4) != 0) {
    throw FormatError("not an embedding cache (bad magic)");
  }
  uint16_t version = r.Le<uint16_t>("version");
  if (version != kCacheVersion) {
    throw FormatError("unsupported embedding cache version " +
                      std::to_string(version));
  }
  EmbeddingCache cache;
  uint8_t normalized = r.Le<uint8_t>("header");
  if (normalized > 1) throw FormatError("bad normalized flag in cache header");
  cache.normalized = normalized == 1;
  cache.dim = r.Le<uint32_t>("header");
  uint64_t count = r.Le<uint64_t>("header");
  if (count > 0 && cache.dim == 0) {
    throw FormatError("cache header declares records of dim 0");
  }
  // Each record takes at least 8 + 4*dim bytes; reject absurd counts before
  // reserving.
  uint64_t min_record = 8 + 4 * static_cast<uint64_t>(cache.dim);
  if (count > r.Remaining() / min_record) {
    throw FormatError("embedding cache truncated: header declares " +
                      std::to_string(count) + " records");
  }
  cache.records.reserve(count);
  for (uint64_t i = 0; i < count; ++i) {
    EmbeddingRecord rec;
    uint32_t id_len = r.Le<uint32_t>("node id length");
    rec.node_id = r.Str(id_len, "node id");
    uint8_t kind = r.Le<uint8_t>("entity kind");
    if (kind > 2) throw FormatError("bad entity kind in cache record");
    rec.kind = static_cast<EntityKind>(kind);
    uint8_t field = r.Le<uint8_t>("field tag");
    if (field > 4) throw FormatError("bad field tag in cache record");
    rec.field.kind = static_cast<FieldKind>(field);
    rec.field.alt_index = r.Le<uint16_t>("alt index");
    std::vector<float> values(cache.dim);
    for (uint32_t d = 0; d < cache.dim; ++d) {
      values[d] = std::bit_cast<float>(r.Le<uint32_t>("vector"));
    }
    try {
      rec.vector = EmbeddingVector(std::move(values));
    } catch (const std::invalid_argument &e) {
      throw FormatError("cache record " + rec.node_id + ": " + e.what());
    }
    cache.records.push_back(std::move(rec));
  }
  if (!r.AtEnd()) throw FormatError("trailing bytes after embedding cache");
  return cache;
}

void SaveCache(const EmbeddingCache &cache, const std::filesystem::path &path) {
  std::string bytes = SerializeCache(cache);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("error writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

EmbeddingCache LoadCache(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read embedding cache " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return DeserializeCache(buffer.str());
  } catch (const FormatError &e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace taxolink
