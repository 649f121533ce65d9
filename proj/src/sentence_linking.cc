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

#include "taxolink/sentence_linking.h"

#include <stdexcept>

#include "strings.h"

namespace taxolink {

LinkResult LinkSentence(const SentenceQuery &query, const VectorIndex &index,
                        EmbeddingProvider &provider) {
  if (IsBlank(query.text)) {
    throw std::invalid_argument("sentence query text is empty");
  }
  if (query.k == 0) throw std::invalid_argument("k must be >= 1");
  if (index.kind() != query.kind) {
    throw std::invalid_argument("query asks for " +
                                std::string(KindName(query.kind)) +
                                " but the index holds " +
                                std::string(KindName(index.kind())) + " nodes");
  }
  std::vector<EmbeddingVector> vectors = provider.Embed({query.text});
  return {query, index.TopK(vectors.front(), query.k)};
}

LinkResult LinkTitle(const std::string &title, const VectorIndex &index,
                     EmbeddingProvider &provider, size_t k) {
  return LinkSentence({title, index.kind(), k}, index, provider);
}

}  // namespace taxolink
