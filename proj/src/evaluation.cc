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

#include "taxolink/evaluation.h"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <unordered_map>

#include "taxolink/errors.h"

namespace taxolink {

InKbSet FilterInKb(std::vector<GoldInstance> instances) {
  InKbSet out;
  for (GoldInstance &inst : instances) {
    size_t label_unks = static_cast<size_t>(
        std::count(inst.gold_labels.begin(), inst.gold_labels.end(), kUnk));
    size_t span_unks = static_cast<size_t>(std::count_if(
        inst.gold_spans.begin(), inst.gold_spans.end(),
        [](const GoldSpan &s) { return s.label == kUnk; }));
    out.unk_removed += inst.gold_spans.empty() ? label_unks : span_unks;
    std::erase(inst.gold_labels, kUnk);
    std::erase_if(inst.gold_spans,
                  [](const GoldSpan &s) { return s.label == kUnk; });
    if (inst.gold_labels.empty()) {
      ++out.dropped;
      continue;
    }
    out.instances.push_back(std::move(inst));
  }
  return out;
}

SpanScores SpanF1Strict(const std::vector<LabeledSpan> &predicted,
                        const std::vector<LabeledSpan> &gold) {
  SpanScores s;
  if (predicted.empty() && gold.empty()) {
    s.precision = s.recall = s.f1 = 1.0;
    return s;
  }
  std::map<LabeledSpan, size_t> gold_counts;
  for (const LabeledSpan &g : gold) ++gold_counts[g];
  for (const LabeledSpan &p : predicted) {
    auto it = gold_counts.find(p);
    if (it != gold_counts.end() && it->second > 0) {
      --it->second;
      ++s.true_positives;
    }
  }
  double tp = static_cast<double>(s.true_positives);
  s.precision = predicted.empty() ? 0.0 : tp / predicted.size();
  s.recall = gold.empty() ? 0.0 : tp / gold.size();
  s.f1 = (s.precision + s.recall) == 0.0
             ? 0.0
             : 2.0 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

double Jaccard(const TokenSet &a, const TokenSet &b) {
  if (a.empty() && b.empty()) return 0.0;
  size_t common = 0;
  for (size_t t : a) common += b.count(t);
  return static_cast<double>(common) /
         static_cast<double>(a.size() + b.size() - common);
}

std::vector<Attribution> AttributeMentions(
    const std::vector<TokenSet> &mentions, const std::vector<GoldSpan> &gold) {
  std::vector<Attribution> out;
  out.reserve(mentions.size());
  for (size_t m = 0; m < mentions.size(); ++m) {
    Attribution a;
    a.mention = m;
    a.label = std::string(kUnk);
    for (size_t g = 0; g < gold.size(); ++g) {
      double j = Jaccard(mentions[m], gold[g].tokens);
      if (j <= 0.0) continue;
      bool better = !a.gold_span || j > a.jaccard ||
                    (j == a.jaccard && *gold[g].tokens.begin() <
                                           *gold[*a.gold_span].tokens.begin());
      if (better) {
        a.gold_span = g;
        a.jaccard = j;
        a.label = gold[g].label;
      }
    }
    out.push_back(std::move(a));
  }
  return out;
}

TokenSet MentionTokens(const Mention &mention) {
  TokenSet tokens;
  for (size_t t = mention.doc_token_start; t < mention.doc_token_end; ++t) {
    tokens.insert(t);
  }
  return tokens;
}

std::vector<Attribution> AttributeMentions(
    const std::vector<MentionLinkResult> &extracted,
    const std::vector<GoldSpan> &gold) {
  std::vector<TokenSet> sets;
  sets.reserve(extracted.size());
  for (const MentionLinkResult &r : extracted) {
    sets.push_back(MentionTokens(r.mention));
  }
  return AttributeMentions(sets, gold);
}

double AccuracyAt1(const std::vector<AccuracyRecord> &records) {
  size_t scored = 0, hits = 0;
  for (const AccuracyRecord &r : records) {
    if (r.unk) continue;
    ++scored;
    if (!r.ranked.empty() && r.gold.contains(r.ranked.front())) ++hits;
  }
  if (scored == 0) throw EvalError("empty evaluation set");
  return static_cast<double>(hits) / static_cast<double>(scored);
}

std::vector<ScoredTarget> MergeMentionCandidates(
    const std::vector<LinkedMention> &mentions) {
  std::unordered_map<std::string, ScoredTarget> best;
  for (const LinkedMention &m : mentions) {
    for (const ScoredTarget &c : m.candidates) {
      auto [it, inserted] = best.emplace(c.node_id, c);
      if (!inserted && c.score > it->second.score) it->second = c;
    }
  }
  std::vector<ScoredTarget> merged;
  merged.reserve(best.size());
  for (auto &[id, c] : best) merged.push_back(std::move(c));
  std::sort(merged.begin(), merged.end(),
            [](const ScoredTarget &a, const ScoredTarget &b) {
              if (a.score != b.score) return a.score > b.score;
              return a.node_id < b.node_id;
            });
  return merged;
}

namespace {

std::vector<std::string> Targets(const std::vector<ScoredTarget> &candidates) {
  std::vector<std::string> out;
  out.reserve(candidates.size());
  for (const ScoredTarget &c : candidates) out.push_back(c.target);
  return out;
}

template <typename Results>
void CheckResultIds(const std::vector<GoldInstance> &gold,
                    const Results &results) {
  std::set<std::string> ids;
  for (const GoldInstance &g : gold) ids.insert(g.id);
  for (const auto &[id, unused] : results) {
    if (!ids.contains(id)) {
      throw EvalError("result for instance '" + id +
                      "' has no gold counterpart");
    }
  }
}

// Kinds present in `gold`, in enum order.
std::map<EntityKind, std::vector<GoldInstance>> GroupByKind(
    const std::vector<GoldInstance> &gold) {
  std::map<EntityKind, std::vector<GoldInstance>> groups;
  for (const GoldInstance &g : gold) groups[g.kind].push_back(g);
  return groups;
}

template <typename Results>
const auto &RequireResult(const Results &results, const std::string &id) {
  auto it = results.find(id);
  if (it == results.end()) {
    throw EvalError("no result for in-KB instance '" + id + "'");
  }
  return it->second;
}

}  // namespace

std::vector<EvalReport> EvaluateSentenceResults(
    std::string_view method, const std::vector<GoldInstance> &gold,
    const std::map<std::string, std::vector<ScoredTarget>> &results) {
  CheckResultIds(gold, results);
  std::vector<EvalReport> reports;
  for (auto &[kind, instances] : GroupByKind(gold)) {
    InKbSet in_kb = FilterInKb(instances);
    EvalReport report;
    report.method = std::string(method);
    report.kind = kind;
    report.unk_removed = in_kb.unk_removed;
    report.instances = in_kb.instances.size();
    std::vector<AccuracyRecord> records;
    for (const GoldInstance &inst : in_kb.instances) {
      const auto &candidates = RequireResult(results, inst.id);
      AccuracyRecord record{Targets(candidates),
                            {inst.gold_labels.begin(), inst.gold_labels.end()},
                            false};
      bool correct = !record.ranked.empty() &&
                     record.gold.contains(record.ranked.front());
      report.entities += inst.gold_labels.size();
      report.instance_ids.push_back(inst.id);
      report.trace.push_back(
          {inst.id, std::nullopt, inst.gold_labels, candidates, correct, false});
      records.push_back(std::move(record));
    }
    report.evaluated = records.size();
    report.accuracy_at_1 = AccuracyAt1(records);
    std::sort(report.instance_ids.begin(), report.instance_ids.end());
    reports.push_back(std::move(report));
  }
  return reports;
}

std::vector<EvalReport> EvaluateEntityResults(
    const std::vector<GoldInstance> &gold,
    const std::map<std::string, std::vector<LinkedMention>> &results) {
  CheckResultIds(gold, results);
  static const std::vector<LinkedMention> kNoMentions;
  std::vector<EvalReport> reports;
  for (auto &[kind, instances] : GroupByKind(gold)) {
    EvalReport report;
    report.method = "el";
    report.kind = kind;

    // Mentions of other kinds belong to other evaluation sets.
    auto mentions_of = [&, kind = kind](const std::string &id) {
      auto it = results.find(id);
      const auto &all = it == results.end() ? kNoMentions : it->second;
      std::vector<LinkedMention> same;
      for (const LinkedMention &m : all) {
        if (m.kind == kind) same.push_back(m);
      }
      return same;
    };

    // Sentence level over the in-KB instances.
    InKbSet in_kb = FilterInKb(instances);
    report.unk_removed = in_kb.unk_removed;
    report.instances = in_kb.instances.size();
    std::vector<AccuracyRecord> sentence_records;
    for (const GoldInstance &inst : in_kb.instances) {
      RequireResult(results, inst.id);
      std::vector<ScoredTarget> merged =
          MergeMentionCandidates(mentions_of(inst.id));
      AccuracyRecord record{Targets(merged),
                            {inst.gold_labels.begin(), inst.gold_labels.end()},
                            false};
      bool correct = !record.ranked.empty() &&
                     record.gold.contains(record.ranked.front());
      report.instance_ids.push_back(inst.id);
      report.trace.push_back(
          {inst.id, std::nullopt, inst.gold_labels, merged, correct, false});
      sentence_records.push_back(std::move(record));
    }
    report.accuracy_at_1 = AccuracyAt1(sentence_records);
    std::sort(report.instance_ids.begin(), report.instance_ids.end());

    // Entity level, attributing against every gold span so mentions on UNK
    // entities drop out instead of borrowing a neighbouring span.
    std::vector<AccuracyRecord> entity_records;
    std::vector<LabeledSpan> predicted_spans, gold_spans;
    bool has_spans = false;
    for (const GoldInstance &inst : instances) {
      has_spans = has_spans || !inst.gold_spans.empty();
      std::vector<LinkedMention> mentions = mentions_of(inst.id);
      for (const GoldSpan &g : inst.gold_spans) {
        if (g.tokens.empty()) continue;
        gold_spans.push_back({*g.tokens.begin(), *g.tokens.rbegin() + 1, kind});
        if (g.label != kUnk) ++report.entities;
      }
      std::vector<TokenSet> token_sets;
      for (const LinkedMention &m : mentions) {
        predicted_spans.push_back({m.token_start, m.token_end, m.kind});
        TokenSet tokens;
        for (size_t t = m.token_start; t < m.token_end; ++t) tokens.insert(t);
        token_sets.push_back(std::move(tokens));
      }
      if (inst.gold_spans.empty()) continue;
      for (const Attribution &a : AttributeMentions(token_sets, inst.gold_spans)) {
        const LinkedMention &m = mentions[a.mention];
        AccuracyRecord record{Targets(m.candidates), {a.label}, a.label == kUnk};
        bool correct = !record.unk && !record.ranked.empty() &&
                       record.gold.contains(record.ranked.front());
        report.trace.push_back(
            {inst.id, m.surface, {a.label}, m.candidates, correct, record.unk});
        entity_records.push_back(std::move(record));
      }
    }
    size_t scored = static_cast<size_t>(
        std::count_if(entity_records.begin(), entity_records.end(),
                      [](const AccuracyRecord &r) { return !r.unk; }));
    report.evaluated = scored;
    if (scored > 0) report.entity_accuracy_at_1 = AccuracyAt1(entity_records);
    if (has_spans) report.span_f1 = SpanF1Strict(predicted_spans, gold_spans);
    reports.push_back(std::move(report));
  }
  return reports;
}

namespace {

std::string MethodTitle(const std::string &method) {
  if (method == "el") return "Entity Linking";
  if (method == "sl") return "Sentence Linking";
  if (method == "title") return "Title Linking";
  return method;
}

}  // namespace

ComparisonTable CompareMethods(const std::vector<EvalReport> &sl,
                               const std::vector<EvalReport> &el,
                               const std::vector<EvalReport> &title) {
  ComparisonTable table;
  std::map<EntityKind, std::pair<std::string, std::vector<std::string>>>
      ids_by_kind;
  std::set<EntityKind> kinds;
  auto add = [&](const std::string &method,
                 const std::vector<EvalReport> &reports) {
    if (reports.empty()) return;
    table.methods.push_back(method);
    for (const EvalReport &r : reports) {
      auto [it, inserted] =
          ids_by_kind.emplace(r.kind, std::pair(method, r.instance_ids));
      if (!inserted && it->second.second != r.instance_ids) {
        throw EvalError(MethodTitle(method) + " and " +
                        MethodTitle(it->second.first) +
                        " cover different " + std::string(KindName(r.kind)) +
                        " instances");
      }
      if (!r.accuracy_at_1) {
        throw EvalError(MethodTitle(method) + " report for " +
                        std::string(KindName(r.kind)) + " has no accuracy");
      }
      table.cells[{method, r.kind}] = *r.accuracy_at_1;
      kinds.insert(r.kind);
    }
  };
  add("el", el);
  add("sl", sl);
  add("title", title);
  table.kinds.assign(kinds.begin(), kinds.end());
  return table;
}

std::string ComparisonTable::Render() const {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header = {"method"};
  for (EntityKind kind : kinds) header.emplace_back(KindName(kind));
  rows.push_back(header);
  for (const std::string &method : methods) {
    std::vector<std::string> row = {MethodTitle(method)};
    for (EntityKind kind : kinds) {
      auto it = cells.find({method, kind});
      if (it == cells.end()) {
        row.emplace_back("-");
      } else {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.4f", it->second);
        row.emplace_back(buf);
      }
    }
    rows.push_back(std::move(row));
  }
  std::vector<size_t> widths(header.size(), 0);
  for (const auto &row : rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      widths[c] = std::max(widths[c], row[c].size());
    }
  }
  std::ostringstream out;
  for (const auto &row : rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out << "  ";
      out << row[c];
      if (c + 1 < row.size()) out << std::string(widths[c] - row[c].size(), ' ');
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace taxolink
