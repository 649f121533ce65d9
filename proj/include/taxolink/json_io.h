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

#ifndef TAXOLINK_JSON_IO_H_
#define TAXOLINK_JSON_IO_H_

#include <filesystem>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "taxolink/entity_linking.h"
#include "taxolink/evaluation.h"
#include "taxolink/sentence_linking.h"
#include "taxolink/taxonomy.h"

namespace taxolink {

// JSON Lines readers call `fn` once per non-blank line with the parsed
// object and its 1-based line number. Parse errors are FormatErrors that
// name the line.
void ForEachJsonLine(std::istream &in, const std::string &source,
                     const std::function<void(const nlohmann::json &, size_t)> &fn);
void ForEachJsonLine(const std::filesystem::path &path,
                     const std::function<void(const nlohmann::json &, size_t)> &fn);

// Ids may be strings or numbers in input files; numbers are kept in their
// JSON spelling.
std::string JsonId(const nlohmann::json &value);

// A document to link: {"id", "text", optional "title", optional "kind"}.
struct InputDocument {
  Document doc;
  std::optional<std::string> title;
  std::optional<EntityKind> kind;
};
InputDocument ParseInputDocument(const nlohmann::json &value);

// Evaluation set line:
//   {"id", "text", "kind", "gold": [...],
//    optional "title", optional "gold_spans": [{"tokens": [...], "label"}]}
// "gold" may be omitted when spans are given; it is then the list of span
// labels.
GoldInstance ParseGoldInstance(const nlohmann::json &value);
std::vector<GoldInstance> ReadGoldInstances(const std::filesystem::path &path);
nlohmann::json GoldInstanceToJson(const GoldInstance &instance);

// Maps node ids to target labels and preferred labels when writing
// candidates. Missing sets fall back to the node id.
class CandidateNamer {
 public:
  void Add(const ReferenceSet *set) {
    if (set != nullptr) sets_[set->kind()] = set;
  }
  nlohmann::json Candidates(EntityKind kind,
                            const std::vector<RankedCandidate> &ranked) const;

 private:
  std::map<EntityKind, const ReferenceSet *> sets_;
};

// {"id", "kind", "mode", "candidates": [{"node_id", "target", "label",
// "score", "field"}]}
nlohmann::json SentenceResultToJson(const std::string &id,
                                    const std::string &mode,
                                    const LinkResult &result,
                                    const CandidateNamer &namer);

// {"id", "mentions": [{"kind", "surface", "char_span": [s, e],
// "token_span": [s, e], "candidates": [...]}]}
nlohmann::json EntityResultToJson(const std::string &id,
                                  const std::vector<MentionLinkResult> &results,
                                  const CandidateNamer &namer);

nlohmann::json ErrorResultToJson(const std::string &id,
                                 const std::string &message);

// Results files as written above. Lines carrying "error" count as an empty
// result for their id. Duplicate ids are a FormatError.
std::map<std::string, std::vector<ScoredTarget>> ReadSentenceResults(
    const std::filesystem::path &path);
std::map<std::string, std::vector<LinkedMention>> ReadEntityResults(
    const std::filesystem::path &path);

nlohmann::json ReportToJson(const EvalReport &report, bool with_trace = true);
// Aligned text lines, one per report.
std::string RenderReports(const std::vector<EvalReport> &reports);
nlohmann::json ComparisonToJson(const ComparisonTable &table);

}  // namespace taxolink

#endif  // TAXOLINK_JSON_IO_H_
