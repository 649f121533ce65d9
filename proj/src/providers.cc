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

#include "taxolink/providers.h"

#include <charconv>
#include <fstream>

#include <nlohmann/json.hpp>

#include "strings.h"
#include "taxolink/errors.h"

namespace taxolink {

using nlohmann::json;

ReplayProvider::ReplayProvider(
    std::unordered_map<std::string, std::vector<float>> table) {
  for (auto &[text, values] : table) {
    if (dim_ == 0) dim_ = values.size();
    if (values.size() != dim_) {
      throw FormatError("replay table: vector for '" + text + "' has dim " +
                        std::to_string(values.size()) + ", expected " +
                        std::to_string(dim_));
    }
    try {
      table_.emplace(text, EmbeddingVector(std::move(values)));
    } catch (const std::invalid_argument &e) {
      throw FormatError("replay table: vector for '" + text + "': " +
                        e.what());
    }
  }
}

ReplayProvider ReplayProvider::FromFile(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw ProviderError("cannot read replay table " + path.string());
  std::unordered_map<std::string, std::vector<float>> table;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (IsBlank(line)) continue;
    try {
      json entry = json::parse(line);
      table[entry.at("text").get<std::string>()] =
          entry.at("vector").get<std::vector<float>>();
    } catch (const json::exception &e) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": " +
                        e.what());
    }
  }
  return ReplayProvider(std::move(table));
}

std::vector<EmbeddingVector> ReplayProvider::EmbedBatch(
    const std::vector<std::string> &texts) {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const std::string &text : texts) {
    auto it = table_.find(text);
    if (it == table_.end()) {
      throw ProviderError("replay provider has no vector for text: " + text);
    }
    out.push_back(it->second);
  }
  return out;
}

namespace {

uint64_t Fnv1a(std::string_view s) {
  uint64_t h = 14695981039346656037ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

uint64_t SplitMix64(uint64_t &state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

bool IsWordChar(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
         static_cast<unsigned char>(c) >= 0x80;
}

}  // namespace

HashingProvider::HashingProvider(size_t dim, uint64_t seed)
    : dim_(dim), seed_(seed) {
  if (dim_ == 0) throw std::invalid_argument("hashing provider needs dim > 0");
}

EmbeddingVector HashingProvider::EmbedOne(std::string_view text) const {
  std::string lower = AsciiLower(text);
  std::vector<std::string_view> words;
  size_t i = 0;
  while (i < lower.size()) {
    while (i < lower.size() && !IsWordChar(lower[i])) ++i;
    size_t start = i;
    while (i < lower.size() && IsWordChar(lower[i])) ++i;
    if (i > start) words.push_back(std::string_view(lower).substr(start, i - start));
  }
  std::string trimmed(Trim(lower));
  if (words.empty()) words.push_back(trimmed);

  std::vector<double> acc(dim_, 0.0);
  for (std::string_view word : words) {
    uint64_t state = Fnv1a(word) ^ seed_;
    for (size_t d = 0; d < dim_; ++d) {
      // Uniform in [-1, 1).
      acc[d] += static_cast<double>(SplitMix64(state) >> 11) * 0x1.0p-52 - 1.0;
    }
  }
  std::vector<float> values(dim_);
  for (size_t d = 0; d < dim_; ++d) values[d] = static_cast<float>(acc[d]);
  return EmbeddingVector(std::move(values));
}

std::vector<EmbeddingVector> HashingProvider::EmbedBatch(
    const std::vector<std::string> &texts) {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const std::string &text : texts) out.push_back(EmbedOne(text));
  return out;
}

ServiceProvider::ServiceProvider(std::unique_ptr<LineChannel> channel,
                                 size_t expected_dim)
    : channel_(std::move(channel)), dim_(expected_dim) {}

std::vector<EmbeddingVector> ServiceProvider::EmbedBatch(
    const std::vector<std::string> &texts) {
  json request = {{"op", "embed"}, {"texts", texts}};
  std::string reply = channel_->RoundTrip(request.dump());
  json response;
  try {
    response = json::parse(reply);
  } catch (const json::exception &e) {
    throw ProviderError(std::string("embedding service sent invalid JSON: ") +
                        e.what());
  }
  if (response.contains("error")) {
    throw ProviderError("embedding service error: " +
                        response["error"].dump());
  }
  std::vector<EmbeddingVector> out;
  try {
    size_t declared = response.at("dim").get<size_t>();
    if (dim_ == 0) dim_ = declared;
    if (declared != dim_) {
      throw ProviderError("embedding service declared dim " +
                          std::to_string(declared) + ", expected " +
                          std::to_string(dim_));
    }
    for (const json &v : response.at("vectors")) {
      std::vector<float> values;
      for (const json &x : v) {
        if (!x.is_number()) {
          throw ProviderError("embedding service returned a non-finite value");
        }
        values.push_back(x.get<float>());
      }
      if (values.size() != dim_) {
        throw ProviderError("embedding service returned a vector of dim " +
                            std::to_string(values.size()) + ", declared " +
                            std::to_string(dim_));
      }
      try {
        out.emplace_back(std::move(values));
      } catch (const std::invalid_argument &e) {
        throw ProviderError(std::string("embedding service: ") + e.what());
      }
    }
  } catch (const json::exception &e) {
    throw ProviderError(std::string("malformed embedding response: ") +
                        e.what());
  }
  return out;
}

std::unique_ptr<EmbeddingProvider> MakeProvider(std::string_view spec) {
  if (spec.starts_with("replay:")) {
    return std::make_unique<ReplayProvider>(
        ReplayProvider::FromFile(std::string(spec.substr(7))));
  }
  if (spec.starts_with("hash:") || spec == "hash") {
    size_t dim = 64;
    uint64_t seed = 0;
    std::string_view rest = spec.size() > 5 ? spec.substr(5) : "";
    std::string_view dim_text = rest.substr(0, rest.find(':'));
    auto parse = [&](std::string_view s, auto &value) {
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
      if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ProviderError("bad hashing provider spec: " + std::string(spec));
      }
    };
    if (!dim_text.empty()) parse(dim_text, dim);
    if (size_t colon = rest.find(':'); colon != std::string_view::npos) {
      parse(rest.substr(colon + 1), seed);
    }
    if (dim == 0) throw ProviderError("hashing provider needs dim > 0");
    return std::make_unique<HashingProvider>(dim, seed);
  }
  return std::make_unique<ServiceProvider>(OpenLineChannel(spec));
}

}  // namespace taxolink
