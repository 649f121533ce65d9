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

#ifndef TAXOLINK_VECTOR_INDEX_H_
#define TAXOLINK_VECTOR_INDEX_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "taxolink/embedding.h"
#include "taxolink/embedding_cache.h"

namespace taxolink {

// Cosine similarity. Throws std::invalid_argument on a dim mismatch or a
// zero-norm input.
double Cosine(const EmbeddingVector &u, const EmbeddingVector &v);

struct RankedCandidate {
  std::string node_id;
  double score = 0.0;
  FieldTag best_field;

  bool operator==(const RankedCandidate &other) const = default;
};

// Orders by score descending, then node id ascending.
bool RanksBefore(const RankedCandidate &a, const RankedCandidate &b);

// Exact cosine search over a dense row-major matrix. A node may own several
// rows (multi-embedding strategies); its score is the best of its rows.
// Immutable once built, so concurrent queries are safe.
class VectorIndex {
 public:
  // Throws std::invalid_argument on an empty record list, mixed kinds,
  // mixed dims or a zero-norm row.
  explicit VectorIndex(const std::vector<EmbeddingRecord> &records);

  EntityKind kind() const { return kind_; }
  size_t dim() const { return dim_; }
  size_t rows() const { return row_node_.size(); }
  size_t nodes() const { return node_ids_.size(); }
  bool normalized() const { return normalized_; }
  size_t MemoryBytes() const { return matrix_.size() * sizeof(float); }

  // At most k candidates, one per node, sorted by RanksBefore. Throws
  // std::invalid_argument when k == 0 or the query dim differs.
  std::vector<RankedCandidate> TopK(const EmbeddingVector &query,
                                    size_t k) const;

 private:
  EntityKind kind_;
  size_t dim_ = 0;
  bool normalized_ = true;
  std::vector<float> matrix_;
  std::vector<double> norms_;
  std::vector<size_t> row_node_;
  std::vector<FieldTag> row_field_;
  std::vector<std::string> node_ids_;
};

VectorIndex BuildIndex(const std::vector<EmbeddingRecord> &records);
VectorIndex BuildIndex(const EmbeddingCache &cache);

std::vector<RankedCandidate> QueryTopK(const VectorIndex &index,
                                       const EmbeddingVector &query, size_t k);

}  // namespace taxolink

#endif  // TAXOLINK_VECTOR_INDEX_H_
