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

#ifndef TAXOLINK_SENTENCE_LINKING_H_
#define TAXOLINK_SENTENCE_LINKING_H_

#include <string>
#include <vector>

#include "taxolink/embedding.h"
#include "taxolink/vector_index.h"

namespace taxolink {

struct SentenceQuery {
  std::string text;
  EntityKind kind = EntityKind::kOccupation;
  size_t k = 10;
};

struct LinkResult {
  SentenceQuery query;
  std::vector<RankedCandidate> candidates;
};

// Embeds the whole query text and returns the k nearest nodes of the
// query's kind. Throws std::invalid_argument on a blank query, k == 0, or
// when the index holds another kind or another dim.
LinkResult LinkSentence(const SentenceQuery &query, const VectorIndex &index,
                        EmbeddingProvider &provider);

// Title linking: the same retrieval with the job title as the query.
LinkResult LinkTitle(const std::string &title, const VectorIndex &index,
                     EmbeddingProvider &provider, size_t k);

}  // namespace taxolink

#endif  // TAXOLINK_SENTENCE_LINKING_H_
