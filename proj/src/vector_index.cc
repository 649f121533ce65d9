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

#include "taxolink/vector_index.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace taxolink {

double Cosine(const EmbeddingVector &u, const EmbeddingVector &v) {
  if (u.dim() != v.dim()) {
    throw std::invalid_argument("cosine: dim mismatch " +
                                std::to_string(u.dim()) + " vs " +
                                std::to_string(v.dim()));
  }
  double dot = 0.0, uu = 0.0, vv = 0.0;
  for (size_t i = 0; i < u.dim(); ++i) {
    dot += static_cast<double>(u[i]) * v[i];
    uu += static_cast<double>(u[i]) * u[i];
    vv += static_cast<double>(v[i]) * v[i];
  }
  if (uu == 0.0 || vv == 0.0) {
    throw std::invalid_argument("cosine: zero-norm vector");
  }
  return std::clamp(dot / (std::sqrt(uu) * std::sqrt(vv)), -1.0, 1.0);
}

bool RanksBefore(const RankedCandidate &a, const RankedCandidate &b) {
  if (a.score != b.score) return a.score > b.score;
  return a.node_id < b.node_id;
}

VectorIndex::VectorIndex(const std::vector<EmbeddingRecord> &records) {
  if (records.empty()) {
    throw std::invalid_argument("cannot build an index from zero records");
  }
  kind_ = records.front().kind;
  dim_ = records.front().vector.dim();
  matrix_.reserve(records.size() * dim_);
  norms_.reserve(records.size());
  row_node_.reserve(records.size());
  row_field_.reserve(records.size());

  std::unordered_map<std::string, size_t> ordinal;
  for (const EmbeddingRecord &r : records) {
    if (r.kind != kind_) {
      throw std::invalid_argument("index records mix entity kinds");
    }
    if (r.vector.dim() != dim_) {
      throw std::invalid_argument(
          "index records disagree on dim: " + std::to_string(dim_) + " vs " +
          std::to_string(r.vector.dim()) + " (node " + r.node_id + ")");
    }
    double norm = r.vector.Norm();
    if (norm == 0.0) {
      throw std::invalid_argument("zero-norm vector for node " + r.node_id);
    }
    if (std::abs(norm - 1.0) > 1e-5) normalized_ = false;
    auto [it, inserted] = ordinal.emplace(r.node_id, node_ids_.size());
    if (inserted) node_ids_.push_back(r.node_id);
    row_node_.push_back(it->second);
    row_field_.push_back(r.field);
    norms_.push_back(norm);
    matrix_.insert(matrix_.end(), r.vector.values().begin(),
                   r.vector.values().end());
  }
}

std::vector<RankedCandidate> VectorIndex::TopK(const EmbeddingVector &query,
                                               size_t k) const {
  if (k == 0) throw std::invalid_argument("top-k: k must be >= 1");
  if (query.dim() != dim_) {
    throw std::invalid_argument("query dim " + std::to_string(query.dim()) +
                                " does not match index dim " +
                                std::to_string(dim_));
  }
  double qnorm = query.Norm();
  if (qnorm == 0.0) throw std::invalid_argument("zero-norm query vector");
  std::span<const float> q = query.values();

  constexpr double kUnset = -2.0;
  std::vector<double> best(node_ids_.size(), kUnset);
  std::vector<size_t> best_row(node_ids_.size(), 0);
  const float *row = matrix_.data();
  for (size_t r = 0; r < row_node_.size(); ++r, row += dim_) {
    double dot = 0.0;
    for (size_t d = 0; d < dim_; ++d) dot += static_cast<double>(row[d]) * q[d];
    // Same expression as Cosine() so equal angles give equal scores.
    double score = std::clamp(dot / (norms_[r] * qnorm), -1.0, 1.0);
    size_t node = row_node_[r];
    if (score > best[node]) {
      best[node] = score;
      best_row[node] = r;
    }
  }

  std::vector<RankedCandidate> candidates;
  candidates.reserve(node_ids_.size());
  for (size_t n = 0; n < node_ids_.size(); ++n) {
    candidates.push_back({node_ids_[n], best[n], row_field_[best_row[n]]});
  }
  size_t keep = std::min(k, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + keep,
                    candidates.end(), RanksBefore);
  candidates.resize(keep);
  return candidates;
}

VectorIndex BuildIndex(const std::vector<EmbeddingRecord> &records) {
  return VectorIndex(records);
}

VectorIndex BuildIndex(const EmbeddingCache &cache) {
  return VectorIndex(cache.records);
}

std::vector<RankedCandidate> QueryTopK(const VectorIndex &index,
                                       const EmbeddingVector &query, size_t k) {
  return index.TopK(query, k);
}

}  // namespace taxolink
