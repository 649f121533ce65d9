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

#ifndef TAXOLINK_ENTITY_LINKING_H_
#define TAXOLINK_ENTITY_LINKING_H_

#include <map>
#include <vector>

#include "taxolink/embedding.h"
#include "taxolink/entity_recognition.h"
#include "taxolink/vector_index.h"

namespace taxolink {

struct MentionLinkResult {
  Mention mention;
  std::vector<RankedCandidate> candidates;
};

// One index per entity kind. Pointers are non-owning.
using IndexMap = std::map<EntityKind, const VectorIndex *>;

// Embeds the mention's document slice and searches the index of the
// mention's kind. Throws NotFoundError when no index is loaded for that
// kind.
MentionLinkResult LinkMention(const Mention &mention, const IndexMap &indexes,
                              EmbeddingProvider &provider, size_t k);

// Recognize followed by LinkMention for every mention, in document order.
// No mentions means no results; there is no fallback to sentence linking.
std::vector<MentionLinkResult> LinkDocument(const Document &doc,
                                            SequenceLabeler &labeler,
                                            const IndexMap &indexes,
                                            EmbeddingProvider &provider,
                                            size_t k);

// Merges the candidate lists of one instance into a single ranking: one
// entry per node with its best score, sorted by RanksBefore. The result
// does not depend on the order of `results`.
std::vector<RankedCandidate> AggregateToSentence(
    const std::vector<MentionLinkResult> &results);

}  // namespace taxolink

#endif  // TAXOLINK_ENTITY_LINKING_H_
