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

#include "taxolink/json_io.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "strings.h"
#include "taxolink/errors.h"

namespace taxolink {

using nlohmann::json;

void ForEachJsonLine(std::istream &in, const std::string &source,
                     const std::function<void(const json &, size_t)> &fn) {
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (IsBlank(line)) continue;
    json value;
    try {
      value = json::parse(line);
    } catch (const json::exception &e) {
      throw FormatError(source + ":" + std::to_string(line_no) + ": " +
                        e.what());
    }
    try {
      fn(value, line_no);
    } catch (const json::exception &e) {
      throw FormatError(source + ":" + std::to_string(line_no) + ": " +
                        e.what());
    } catch (const std::invalid_argument &e) {
      throw FormatError(source + ":" + std::to_string(line_no) + ": " +
                        e.what());
    }
  }
}

void ForEachJsonLine(const std::filesystem::path &path,
                     const std::function<void(const json &, size_t)> &fn) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read " + path.string());
  ForEachJsonLine(in, path.string(), fn);
}

std::string JsonId(const json &value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number()) return value.dump();
  throw std::invalid_argument("id must be a string or a number");
}

namespace {

EntityKind KindField(const json &value, const char *field) {
  std::string text = value.at(field).get<std::string>();
  auto kind = ParseKind(text);
  if (!kind) throw std::invalid_argument("unknown entity kind '" + text + "'");
  return *kind;
}

}  // namespace

InputDocument ParseInputDocument(const json &value) {
  InputDocument in;
  in.doc.id = JsonId(value.at("id"));
  in.doc.text = value.value("text", std::string());
  if (value.contains("title") && value["title"].is_string()) {
    in.title = value["title"].get<std::string>();
  }
  if (value.contains("kind")) in.kind = KindField(value, "kind");
  return in;
}

GoldInstance ParseGoldInstance(const json &value) {
  GoldInstance inst;
  inst.id = JsonId(value.at("id"));
  inst.text = value.value("text", std::string());
  if (value.contains("title") && value["title"].is_string()) {
    inst.title = value["title"].get<std::string>();
  }
  inst.kind = KindField(value, "kind");
  if (value.contains("gold_spans")) {
    for (const json &span : value["gold_spans"]) {
      GoldSpan g;
      for (const json &t : span.at("tokens")) g.tokens.insert(t.get<size_t>());
      g.label = span.at("label").get<std::string>();
      inst.gold_spans.push_back(std::move(g));
    }
  }
  if (value.contains("gold")) {
    const json &gold = value["gold"];
    if (gold.is_string()) {
      inst.gold_labels.push_back(gold.get<std::string>());
    } else {
      inst.gold_labels = gold.get<std::vector<std::string>>();
    }
  } else {
    for (const GoldSpan &g : inst.gold_spans) inst.gold_labels.push_back(g.label);
  }
  if (inst.gold_labels.empty()) {
    throw std::invalid_argument("instance " + inst.id + " has no gold labels");
  }
  return inst;
}

std::vector<GoldInstance> ReadGoldInstances(const std::filesystem::path &path) {
  std::vector<GoldInstance> instances;
  std::set<std::string> seen;
  ForEachJsonLine(path, [&](const json &value, size_t line) {
    GoldInstance inst = ParseGoldInstance(value);
    if (!seen.insert(inst.id).second) {
      throw std::invalid_argument("duplicate instance id " + inst.id +
                                  " on line " + std::to_string(line));
    }
    instances.push_back(std::move(inst));
  });
  return instances;
}

json GoldInstanceToJson(const GoldInstance &instance) {
  json out = {{"id", instance.id},
              {"text", instance.text},
              {"kind", KindName(instance.kind)},
              {"gold", instance.gold_labels}};
  if (instance.title) out["title"] = *instance.title;
  if (!instance.gold_spans.empty()) {
    json spans = json::array();
    for (const GoldSpan &g : instance.gold_spans) {
      spans.push_back({{"tokens", std::vector<size_t>(g.tokens.begin(),
                                                      g.tokens.end())},
                       {"label", g.label}});
    }
    out["gold_spans"] = std::move(spans);
  }
  return out;
}

json CandidateNamer::Candidates(
    EntityKind kind, const std::vector<RankedCandidate> &ranked) const {
  auto it = sets_.find(kind);
  const ReferenceSet *set = it == sets_.end() ? nullptr : it->second;
  json out = json::array();
  for (const RankedCandidate &c : ranked) {
    const TaxonomyNode *node = set ? set->Find(c.node_id) : nullptr;
    out.push_back({{"node_id", c.node_id},
                   {"target", node ? node->TargetLabel() : c.node_id},
                   {"label", node ? node->preferred_label : std::string()},
                   {"score", c.score},
                   {"field", FieldTagName(c.best_field)}});
  }
  return out;
}

json SentenceResultToJson(const std::string &id, const std::string &mode,
                          const LinkResult &result,
                          const CandidateNamer &namer) {
  return {{"id", id},
          {"kind", KindName(result.query.kind)},
          {"mode", mode},
          {"candidates", namer.Candidates(result.query.kind, result.candidates)}};
}

json EntityResultToJson(const std::string &id,
                        const std::vector<MentionLinkResult> &results,
                        const CandidateNamer &namer) {
  json mentions = json::array();
  for (const MentionLinkResult &r : results) {
    const Mention &m = r.mention;
    mentions.push_back(
        {{"kind", KindName(m.kind)},
         {"surface", m.surface},
         {"char_span", {m.char_start, m.char_end}},
         {"token_span", {m.doc_token_start, m.doc_token_end}},
         {"candidates", namer.Candidates(m.kind, r.candidates)}});
  }
  return {{"id", id}, {"mode", "el"}, {"mentions", std::move(mentions)}};
}

json ErrorResultToJson(const std::string &id, const std::string &message) {
  return {{"id", id}, {"error", message}};
}

namespace {

std::vector<ScoredTarget> ParseCandidates(const json &list) {
  std::vector<ScoredTarget> out;
  for (const json &c : list) {
    ScoredTarget t;
    t.node_id = c.at("node_id").get<std::string>();
    t.target = c.contains("target") ? c["target"].get<std::string>() : t.node_id;
    t.score = c.at("score").get<double>();
    out.push_back(std::move(t));
  }
  return out;
}

template <typename T>
void InsertUnique(std::map<std::string, T> &results, std::string id, T value,
                  size_t line) {
  if (!results.emplace(id, std::move(value)).second) {
    throw std::invalid_argument("duplicate result id " + id + " on line " +
                                std::to_string(line));
  }
}

}  // namespace

std::map<std::string, std::vector<ScoredTarget>> ReadSentenceResults(
    const std::filesystem::path &path) {
  std::map<std::string, std::vector<ScoredTarget>> results;
  ForEachJsonLine(path, [&](const json &value, size_t line) {
    std::vector<ScoredTarget> candidates;
    if (!value.contains("error")) {
      candidates = ParseCandidates(value.at("candidates"));
    }
    InsertUnique(results, JsonId(value.at("id")), std::move(candidates), line);
  });
  return results;
}

std::map<std::string, std::vector<LinkedMention>> ReadEntityResults(
    const std::filesystem::path &path) {
  std::map<std::string, std::vector<LinkedMention>> results;
  ForEachJsonLine(path, [&](const json &value, size_t line) {
    std::vector<LinkedMention> mentions;
    if (!value.contains("error")) {
      for (const json &m : value.at("mentions")) {
        LinkedMention lm;
        lm.kind = KindField(m, "kind");
        lm.surface = m.value("surface", std::string());
        lm.token_start = m.at("token_span").at(0).get<size_t>();
        lm.token_end = m.at("token_span").at(1).get<size_t>();
        lm.candidates = ParseCandidates(m.at("candidates"));
        mentions.push_back(std::move(lm));
      }
    }
    InsertUnique(results, JsonId(value.at("id")), std::move(mentions), line);
  });
  return results;
}

namespace {

json CandidatesToJson(const std::vector<ScoredTarget> &candidates) {
  json out = json::array();
  for (const ScoredTarget &c : candidates) {
    out.push_back(
        {{"node_id", c.node_id}, {"target", c.target}, {"score", c.score}});
  }
  return out;
}

std::string FormatMetric(const std::optional<double> &value) {
  if (!value) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", *value);
  return buf;
}

}  // namespace

json ReportToJson(const EvalReport &report, bool with_trace) {
  json out = {{"method", report.method},
              {"kind", KindName(report.kind)},
              {"counts",
               {{"instances", report.instances},
                {"entities", report.entities},
                {"unk_removed", report.unk_removed},
                {"evaluated", report.evaluated}}}};
  out["accuracy_at_1"] =
      report.accuracy_at_1 ? json(*report.accuracy_at_1) : json(nullptr);
  if (report.method == "el") {
    out["entity_accuracy_at_1"] = report.entity_accuracy_at_1
                                      ? json(*report.entity_accuracy_at_1)
                                      : json(nullptr);
  }
  if (report.span_f1) {
    out["precision"] = report.span_f1->precision;
    out["recall"] = report.span_f1->recall;
    out["f1_strict"] = report.span_f1->f1;
  }
  if (with_trace) {
    json trace = json::array();
    for (const TraceEntry &t : report.trace) {
      json entry = {{"id", t.instance_id},
                    {"gold", t.gold},
                    {"correct", t.correct},
                    {"candidates", CandidatesToJson(t.candidates)}};
      if (t.mention) entry["mention"] = *t.mention;
      if (t.unk) entry["unk"] = true;
      trace.push_back(std::move(entry));
    }
    out["trace"] = std::move(trace);
  }
  return out;
}

std::string RenderReports(const std::vector<EvalReport> &reports) {
  std::ostringstream out;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-6s %-14s %9s %9s %9s %9s %9s %9s %9s\n",
                "method", "kind", "acc@1", "ent_acc@1", "precision", "recall",
                "f1", "instances", "unk");
  out << buf;
  for (const EvalReport &r : reports) {
    std::optional<double> p, rc, f;
    if (r.span_f1) {
      p = r.span_f1->precision;
      rc = r.span_f1->recall;
      f = r.span_f1->f1;
    }
    std::snprintf(buf, sizeof(buf),
                  "%-6s %-14s %9s %9s %9s %9s %9s %9zu %9zu\n",
                  r.method.c_str(), std::string(KindName(r.kind)).c_str(),
                  FormatMetric(r.accuracy_at_1).c_str(),
                  FormatMetric(r.entity_accuracy_at_1).c_str(),
                  FormatMetric(p).c_str(), FormatMetric(rc).c_str(),
                  FormatMetric(f).c_str(), r.instances, r.unk_removed);
    out << buf;
  }
  return out.str();
}

json ComparisonToJson(const ComparisonTable &table) {
  json rows = json::array();
  for (const std::string &method : table.methods) {
    json row = {{"method", method}};
    for (EntityKind kind : table.kinds) {
      auto it = table.cells.find({method, kind});
      row[std::string(KindName(kind))] =
          it == table.cells.end() ? json(nullptr) : json(it->second);
    }
    rows.push_back(std::move(row));
  }
  return {{"accuracy_at_1", std::move(rows)}};
}

}  // namespace taxolink
