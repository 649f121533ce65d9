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

#include "taxolink/entity_linking.h"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "taxolink/errors.h"

namespace taxolink {

MentionLinkResult LinkMention(const Mention &mention, const IndexMap &indexes,
                              EmbeddingProvider &provider, size_t k) {
  auto it = indexes.find(mention.kind);
  if (it == indexes.end() || it->second == nullptr) {
    throw NotFoundError("no " + std::string(KindName(mention.kind)) +
                            " index loaded for mention '" + mention.surface +
                            "'",
                        std::string(KindName(mention.kind)));
  }
  const VectorIndex &index = *it->second;
  if (index.kind() != mention.kind) {
    throw std::invalid_argument("index registered for " +
                                std::string(KindName(mention.kind)) +
                                " holds " +
                                std::string(KindName(index.kind())) + " nodes");
  }
  std::vector<EmbeddingVector> vectors = provider.Embed({mention.surface});
  return {mention, index.TopK(vectors.front(), k)};
}

std::vector<MentionLinkResult> LinkDocument(const Document &doc,
                                            SequenceLabeler &labeler,
                                            const IndexMap &indexes,
                                            EmbeddingProvider &provider,
                                            size_t k) {
  std::vector<MentionLinkResult> results;
  for (const Mention &mention : Recognize(doc, labeler)) {
    results.push_back(LinkMention(mention, indexes, provider, k));
  }
  return results;
}

std::vector<RankedCandidate> AggregateToSentence(
    const std::vector<MentionLinkResult> &results) {
  std::unordered_map<std::string, RankedCandidate> best;
  for (const MentionLinkResult &r : results) {
    for (const RankedCandidate &c : r.candidates) {
      auto [it, inserted] = best.emplace(c.node_id, c);
      // Equal scores keep the smaller field tag so permuted inputs agree.
      if (!inserted && (c.score > it->second.score ||
                        (c.score == it->second.score &&
                         std::pair(c.best_field.kind, c.best_field.alt_index) <
                             std::pair(it->second.best_field.kind,
                                       it->second.best_field.alt_index)))) {
        it->second = c;
      }
    }
  }
  std::vector<RankedCandidate> merged;
  merged.reserve(best.size());
  for (auto &[id, c] : best) merged.push_back(std::move(c));
  std::sort(merged.begin(), merged.end(), RanksBefore);
  return merged;
}

}  // namespace taxolink
