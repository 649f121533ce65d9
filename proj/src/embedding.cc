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

#include "taxolink/embedding.h"

#include <cmath>
#include <stdexcept>

#include "strings.h"
#include "taxolink/errors.h"

namespace taxolink {

EmbeddingVector::EmbeddingVector(std::vector<float> values)
    : values_(std::move(values)) {
  if (values_.empty()) {
    throw std::invalid_argument("embedding vector must have dim > 0");
  }
  for (float v : values_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("embedding vector has non-finite values");
    }
  }
}

double EmbeddingVector::Norm() const {
  double sum = 0.0;
  for (float v : values_) sum += static_cast<double>(v) * v;
  return std::sqrt(sum);
}

EmbeddingVector EmbeddingVector::Normalized() const {
  double norm = Norm();
  if (norm == 0.0) {
    throw std::invalid_argument("cannot normalize a zero vector");
  }
  std::vector<float> out(values_.size());
  for (size_t i = 0; i < values_.size(); ++i) {
    out[i] = static_cast<float>(values_[i] / norm);
  }
  return EmbeddingVector(std::move(out));
}

std::string StrategyName(EmbeddingStrategy strategy) {
  return "s" + std::to_string(static_cast<int>(strategy));
}

std::optional<EmbeddingStrategy> ParseStrategy(std::string_view text) {
  std::string s = AsciiLower(Trim(text));
  if (s == "s1" || s == "preferred_label") {
    return EmbeddingStrategy::kPreferredLabel;
  }
  if (s == "s2" || s == "description") return EmbeddingStrategy::kDescription;
  if (s == "s3" || s == "label_description") {
    return EmbeddingStrategy::kLabelPlusDescription;
  }
  if (s == "s4" || s == "all_fields") {
    return EmbeddingStrategy::kMultiCombinedFields;
  }
  if (s == "s5" || s == "all_fields_separated") {
    return EmbeddingStrategy::kMultiSeparateAltLabels;
  }
  return std::nullopt;
}

std::string FieldTagName(const FieldTag &tag) {
  switch (tag.kind) {
    case FieldKind::kPreferredLabel:
      return "preferred_label";
    case FieldKind::kDescription:
      return "description";
    case FieldKind::kLabelAndDescription:
      return "label_description";
    case FieldKind::kCombinedAltLabels:
      return "alt_labels";
    case FieldKind::kAltLabel:
      return "alt_label:" + std::to_string(tag.alt_index);
  }
  return "unknown";
}

std::vector<EmbeddingVector> EmbeddingProvider::Embed(
    const std::vector<std::string> &texts) {
  if (texts.empty()) {
    throw std::invalid_argument("provider_embed: empty text list");
  }
  for (size_t i = 0; i < texts.size(); ++i) {
    if (IsBlank(texts[i])) {
      throw std::invalid_argument("provider_embed: text " +
                                  std::to_string(i) + " is blank");
    }
  }
  std::vector<EmbeddingVector> vectors = EmbedBatch(texts);
  if (vectors.size() != texts.size()) {
    throw ProviderError("provider returned " + std::to_string(vectors.size()) +
                        " vectors for " + std::to_string(texts.size()) +
                        " texts");
  }
  size_t expected = dim();
  for (const EmbeddingVector &v : vectors) {
    if (expected != 0 && v.dim() != expected) {
      throw ProviderError("provider returned dim " + std::to_string(v.dim()) +
                          ", declared " + std::to_string(expected));
    }
  }
  return vectors;
}

std::vector<std::pair<FieldTag, std::string>> BuildNodeTexts(
    const TaxonomyNode &node, EmbeddingStrategy strategy) {
  const std::string &label = node.preferred_label;
  const bool has_description = !IsBlank(node.description);
  std::vector<std::pair<FieldTag, std::string>> out;

  switch (strategy) {
    case EmbeddingStrategy::kPreferredLabel:
      out.emplace_back(FieldTag{FieldKind::kPreferredLabel}, label);
      break;
    case EmbeddingStrategy::kDescription:
      out.emplace_back(FieldTag{FieldKind::kDescription},
                       has_description ? node.description : label);
      break;
    case EmbeddingStrategy::kLabelPlusDescription:
      out.emplace_back(
          FieldTag{FieldKind::kLabelAndDescription},
          has_description ? label + ". " + node.description : label);
      break;
    case EmbeddingStrategy::kMultiCombinedFields: {
      out.emplace_back(FieldTag{FieldKind::kPreferredLabel}, label);
      if (has_description) {
        out.emplace_back(FieldTag{FieldKind::kDescription}, node.description);
      }
      if (!node.alt_labels.empty()) {
        std::string joined;
        for (size_t i = 0; i < node.alt_labels.size(); ++i) {
          if (i > 0) joined.push_back('\n');
          joined += node.alt_labels[i];
        }
        out.emplace_back(FieldTag{FieldKind::kCombinedAltLabels},
                         std::move(joined));
      }
      break;
    }
    case EmbeddingStrategy::kMultiSeparateAltLabels:
      out.emplace_back(FieldTag{FieldKind::kPreferredLabel}, label);
      if (has_description) {
        out.emplace_back(FieldTag{FieldKind::kDescription}, node.description);
      }
      for (size_t i = 0; i < node.alt_labels.size(); ++i) {
        out.emplace_back(FieldTag::AltLabel(static_cast<uint16_t>(i)),
                         node.alt_labels[i]);
      }
      break;
  }
  return out;
}

std::vector<EmbeddingRecord> BuildEmbeddings(const ReferenceSet &set,
                                             EmbeddingStrategy strategy,
                                             EmbeddingProvider &provider,
                                             const BuildOptions &options) {
  if (options.batch_size == 0) {
    throw std::invalid_argument("batch size must be positive");
  }
  struct Pending {
    size_t node;
    FieldTag field;
  };
  std::vector<Pending> pending;
  std::vector<std::string> texts;
  for (size_t n = 0; n < set.size(); ++n) {
    for (auto &[field, text] : BuildNodeTexts(set.nodes()[n], strategy)) {
      pending.push_back({n, field});
      texts.push_back(std::move(text));
    }
  }

  std::vector<EmbeddingRecord> records;
  records.reserve(texts.size());
  for (size_t begin = 0; begin < texts.size(); begin += options.batch_size) {
    size_t end = std::min(texts.size(), begin + options.batch_size);
    std::vector<std::string> batch(texts.begin() + begin, texts.begin() + end);
    const TaxonomyNode &first = set.nodes()[pending[begin].node];
    std::vector<EmbeddingVector> vectors;
    try {
      vectors = provider.Embed(batch);
    } catch (const std::exception &e) {
      throw ProviderError("embedding batch starting at node " + first.id +
                          ": " + e.what());
    }
    for (size_t i = begin; i < end; ++i) {
      const TaxonomyNode &node = set.nodes()[pending[i].node];
      EmbeddingVector &v = vectors[i - begin];
      if (options.normalize) {
        if (v.Norm() == 0.0) {
          throw ProviderError("provider returned a zero vector for node " +
                              node.id);
        }
        v = v.Normalized();
      }
      records.push_back({node.id, node.kind, pending[i].field, std::move(v)});
    }
  }
  return records;
}

}  // namespace taxolink
