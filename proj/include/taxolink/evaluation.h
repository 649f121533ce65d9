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

#ifndef TAXOLINK_EVALUATION_H_
#define TAXOLINK_EVALUATION_H_

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "taxolink/entity_linking.h"
#include "taxolink/taxonomy.h"

namespace taxolink {

// Gold label of an entity with no counterpart in the reference set.
inline constexpr std::string_view kUnk = "UNK";

using TokenSet = std::set<size_t>;

struct GoldSpan {
  TokenSet tokens;  // document-level token indices
  std::string label;

  bool operator==(const GoldSpan &other) const = default;
};

struct GoldInstance {
  std::string id;
  std::string text;
  std::optional<std::string> title;
  EntityKind kind = EntityKind::kOccupation;
  std::vector<std::string> gold_labels;
  std::vector<GoldSpan> gold_spans;

  bool operator==(const GoldInstance &other) const = default;
};

struct InKbSet {
  std::vector<GoldInstance> instances;
  size_t unk_removed = 0;
  size_t dropped = 0;
};

// Removes UNK labels and UNK spans and drops instances left without gold
// labels. UNK spans are counted when an instance has spans, UNK entries
// of the label list otherwise.
InKbSet FilterInKb(std::vector<GoldInstance> instances);

struct LabeledSpan {
  size_t start = 0;  // [start, end)
  size_t end = 0;
  EntityKind kind = EntityKind::kOccupation;

  auto operator<=>(const LabeledSpan &other) const = default;
};

struct SpanScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  size_t true_positives = 0;
};

// Exact (span, kind) matching with multiplicity. Both lists empty scores
// 1/1/1; one empty side scores 0 for its ratio and for F1.
SpanScores SpanF1Strict(const std::vector<LabeledSpan> &predicted,
                        const std::vector<LabeledSpan> &gold);

// |a ∩ b| / |a ∪ b|, and 0 when both are empty.
double Jaccard(const TokenSet &a, const TokenSet &b);

struct Attribution {
  size_t mention = 0;
  std::optional<size_t> gold_span;  // index into the gold span list
  std::string label;                // gold label, or UNK without overlap
  double jaccard = 0.0;
};

// Pairs each mention with the gold span of highest Jaccard overlap. Ties go
// to the span starting earliest (then to the earlier list entry); no
// overlap yields UNK.
std::vector<Attribution> AttributeMentions(
    const std::vector<TokenSet> &mentions, const std::vector<GoldSpan> &gold);
std::vector<Attribution> AttributeMentions(
    const std::vector<MentionLinkResult> &extracted,
    const std::vector<GoldSpan> &gold);

TokenSet MentionTokens(const Mention &mention);

struct AccuracyRecord {
  std::vector<std::string> ranked;  // candidate targets, best first
  std::set<std::string> gold;
  bool unk = false;                 // excluded from scoring
};

// Share of non-UNK records whose top candidate is in the gold set. Records
// without candidates count as misses. Throws EvalError when no record is
// left to score.
double AccuracyAt1(const std::vector<AccuracyRecord> &records);

// A candidate as it appears in a results file.
struct ScoredTarget {
  std::string node_id;
  std::string target;
  double score = 0.0;
};

struct LinkedMention {
  EntityKind kind = EntityKind::kOccupation;
  std::string surface;
  size_t token_start = 0;  // document-level [start, end)
  size_t token_end = 0;
  std::vector<ScoredTarget> candidates;
};

struct TraceEntry {
  std::string instance_id;
  std::optional<std::string> mention;
  std::vector<std::string> gold;
  std::vector<ScoredTarget> candidates;
  bool correct = false;
  bool unk = false;
};

struct EvalReport {
  std::string method;  // "sl", "el" or "title"
  EntityKind kind = EntityKind::kOccupation;
  // Sentence-level Accuracy@1 (EL candidates merged per instance).
  std::optional<double> accuracy_at_1;
  // EL only: Accuracy@1 over mentions attributed to in-KB gold spans.
  std::optional<double> entity_accuracy_at_1;
  std::optional<SpanScores> span_f1;
  size_t instances = 0;
  size_t entities = 0;
  size_t unk_removed = 0;
  size_t evaluated = 0;
  std::vector<std::string> instance_ids;
  std::vector<TraceEntry> trace;
};

// Sentence/title linking: one ranked list per instance. `gold` is the raw
// evaluation set; in-KB filtering happens here. Throws EvalError when a
// result id is not in the gold set or an in-KB instance has no result.
std::vector<EvalReport> EvaluateSentenceResults(
    std::string_view method, const std::vector<GoldInstance> &gold,
    const std::map<std::string, std::vector<ScoredTarget>> &results);

// Entity linking: mentions per instance. Produces the sentence-level score
// through AggregateToSentence-style merging, the entity-level score
// through Jaccard attribution against all gold spans (mentions landing on
// UNK spans are excluded), and strict span F1 over instances carrying gold
// spans.
std::vector<EvalReport> EvaluateEntityResults(
    const std::vector<GoldInstance> &gold,
    const std::map<std::string, std::vector<LinkedMention>> &results);

// Merged per-instance ranking of linked mentions: best score per node,
// ties by node id.
std::vector<ScoredTarget> MergeMentionCandidates(
    const std::vector<LinkedMention> &mentions);

struct ComparisonTable {
  std::vector<std::string> methods;  // row order
  std::vector<EntityKind> kinds;     // column order
  // (method, kind) -> sentence-level Accuracy@1
  std::map<std::pair<std::string, EntityKind>, double> cells;

  std::string Render() const;
};

// Lines up sentence-level Accuracy@1 per method and kind. Reports for the
// same kind must cover the same instance ids, otherwise EvalError.
ComparisonTable CompareMethods(const std::vector<EvalReport> &sl,
                               const std::vector<EvalReport> &el,
                               const std::vector<EvalReport> &title);

}  // namespace taxolink

#endif  // TAXOLINK_EVALUATION_H_
