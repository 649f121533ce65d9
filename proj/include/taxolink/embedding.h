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

#ifndef TAXOLINK_EMBEDDING_H_
#define TAXOLINK_EMBEDDING_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "taxolink/taxonomy.h"

namespace taxolink {

// A dense float32 vector. Construction rejects empty input and non-finite
// values.
class EmbeddingVector {
 public:
  EmbeddingVector() = default;
  explicit EmbeddingVector(std::vector<float> values);

  size_t dim() const { return values_.size(); }
  std::span<const float> values() const { return values_; }
  float operator[](size_t i) const { return values_[i]; }

  double Norm() const;

  // Returns a unit-length copy. Throws std::invalid_argument on a zero
  // vector.
  EmbeddingVector Normalized() const;

  bool operator==(const EmbeddingVector &other) const = default;

 private:
  std::vector<float> values_;
};

// How a node's text fields are turned into one or more embeddings.
enum class EmbeddingStrategy : unsigned char {
  kPreferredLabel = 1,          // S1
  kDescription = 2,             // S2
  kLabelPlusDescription = 3,    // S3
  kMultiCombinedFields = 4,     // S4
  kMultiSeparateAltLabels = 5,  // S5
};

inline constexpr EmbeddingStrategy kAllStrategies[] = {
    EmbeddingStrategy::kPreferredLabel,
    EmbeddingStrategy::kDescription,
    EmbeddingStrategy::kLabelPlusDescription,
    EmbeddingStrategy::kMultiCombinedFields,
    EmbeddingStrategy::kMultiSeparateAltLabels};

// "s1".."s5".
std::string StrategyName(EmbeddingStrategy strategy);

// Accepts "s1".."s5" (any case) and the long names "preferred_label",
// "description", "label_description", "all_fields", "all_fields_separated".
std::optional<EmbeddingStrategy> ParseStrategy(std::string_view text);

enum class FieldKind : unsigned char {
  kPreferredLabel = 0,
  kDescription = 1,
  kLabelAndDescription = 2,
  kCombinedAltLabels = 3,
  kAltLabel = 4,
};

// Which node field a vector was computed from. `alt_index` is meaningful
// for kAltLabel only and zero otherwise.
struct FieldTag {
  FieldKind kind = FieldKind::kPreferredLabel;
  uint16_t alt_index = 0;

  static FieldTag AltLabel(uint16_t index) {
    return {FieldKind::kAltLabel, index};
  }

  bool operator==(const FieldTag &other) const = default;
};

std::string FieldTagName(const FieldTag &tag);

struct EmbeddingRecord {
  std::string node_id;
  EntityKind kind = EntityKind::kOccupation;
  FieldTag field;
  EmbeddingVector vector;

  bool operator==(const EmbeddingRecord &other) const = default;
};

// The sentence-encoder contract: texts in, one vector per text out, order
// preserved. Identical texts map to identical vectors within one session.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  // Validates the input (non-empty list, no blank text), forwards to
  // EmbedBatch and checks the result shape. Throws std::invalid_argument on
  // bad input and ProviderError when the provider misbehaves.
  std::vector<EmbeddingVector> Embed(const std::vector<std::string> &texts);

  // Dimension of the vectors, or 0 while unknown (service providers learn
  // it from the first response).
  virtual size_t dim() const = 0;

 protected:
  virtual std::vector<EmbeddingVector> EmbedBatch(
      const std::vector<std::string> &texts) = 0;
};

// The (field, text) pairs a node contributes under `strategy`. Label and
// description are joined with ". "; an empty description falls back to the
// preferred label for S2 and S3 and is omitted for S4 and S5.
std::vector<std::pair<FieldTag, std::string>> BuildNodeTexts(
    const TaxonomyNode &node, EmbeddingStrategy strategy);

struct BuildOptions {
  size_t batch_size = 64;
  bool normalize = true;
};

// Embeds every node of `set` in node order. Provider failures are rethrown
// as ProviderError naming the first node of the failing batch.
std::vector<EmbeddingRecord> BuildEmbeddings(const ReferenceSet &set,
                                             EmbeddingStrategy strategy,
                                             EmbeddingProvider &provider,
                                             const BuildOptions &options = {});

}  // namespace taxolink

#endif  // TAXOLINK_EMBEDDING_H_
