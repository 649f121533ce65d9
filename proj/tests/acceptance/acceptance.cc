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

// Acceptance checks. Prints one PASS, FAIL or SKIP line per criterion and
// exits nonzero when any check fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "taxolink/embedding.h"
#include "taxolink/entity_recognition.h"
#include "taxolink/evaluation.h"
#include "taxolink/providers.h"
#include "taxolink/sentence_linking.h"
#include "taxolink/taxonomy.h"
#include "taxolink/vector_index.h"
#include "test_util.h"

namespace taxolink {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// Outcome of one check: a failure message, a skip reason, or neither.
struct Outcome {
  std::string failure;
  std::string skip;

  static Outcome Pass() { return {}; }
  static Outcome Fail(std::string why) { return {std::move(why), ""}; }
  static Outcome Skip(std::string why) { return {"", std::move(why)}; }
};

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// ---------------------------------------------------------------------------
// Vector index against a brute-force per-node maximum.

Outcome CheckVectorIndex() {
  auto start = Clock::now();
  std::mt19937_64 rng(20261016);
  for (int trial = 0; trial < 500; ++trial) {
    size_t dim = std::uniform_int_distribution<size_t>(1, 16)(rng);
    size_t nodes = std::uniform_int_distribution<size_t>(1, 200)(rng);
    std::normal_distribution<float> gauss(0.0f, 1.0f);
    std::vector<EmbeddingRecord> records;
    std::vector<std::string> ids;
    for (size_t n = 0; n < nodes; ++n) {
      ids.push_back("n" + std::to_string(n));
      size_t per_node = std::uniform_int_distribution<size_t>(1, 5)(rng);
      for (size_t r = 0; r < per_node; ++r) {
        std::vector<float> v(dim);
        do {
          for (float &x : v) x = gauss(rng);
        } while (std::all_of(v.begin(), v.end(),
                             [](float x) { return x == 0.0f; }));
        records.push_back({ids.back(), EntityKind::kSkill,
                           FieldTag::AltLabel(static_cast<uint16_t>(r)),
                           EmbeddingVector(v)});
      }
    }
    std::vector<float> q(dim);
    do {
      for (float &x : q) x = gauss(rng);
    } while (std::all_of(q.begin(), q.end(), [](float x) { return x == 0; }));
    size_t k = std::uniform_int_distribution<size_t>(1, nodes + 3)(rng);

    // Oracle: long double cosine per record, max per node, sort.
    std::map<std::string, long double> best;
    for (const EmbeddingRecord &r : records) {
      long double dot = 0, nr = 0, nq = 0;
      for (size_t i = 0; i < dim; ++i) {
        dot += static_cast<long double>(r.vector[i]) * q[i];
        nr += static_cast<long double>(r.vector[i]) * r.vector[i];
        nq += static_cast<long double>(q[i]) * q[i];
      }
      long double cos = dot / (std::sqrt(nr) * std::sqrt(nq));
      auto it = best.find(r.node_id);
      if (it == best.end() || cos > it->second) best[r.node_id] = cos;
    }
    std::vector<std::pair<std::string, long double>> expected(best.begin(),
                                                              best.end());
    std::sort(expected.begin(), expected.end(), [](const auto &a, const auto &b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    expected.resize(std::min(k, expected.size()));

    VectorIndex index(records);
    std::vector<RankedCandidate> got = QueryTopK(index, EmbeddingVector(q), k);
    if (got.size() != expected.size()) {
      return Outcome::Fail("trial " + std::to_string(trial) + ": size");
    }
    for (size_t i = 0; i < got.size(); ++i) {
      if (got[i].node_id != expected[i].first ||
          std::fabs(got[i].score - static_cast<double>(expected[i].second)) >
              1e-6) {
        return Outcome::Fail("trial " + std::to_string(trial) + " rank " +
                             std::to_string(i) + ": got " + got[i].node_id +
                             ", want " + expected[i].first);
      }
    }
  }
  double t = Seconds(start);
  if (t >= 10.0) return Outcome::Fail("took " + std::to_string(t) + " s");
  return Outcome::Pass();
}

// ---------------------------------------------------------------------------
// BIO repair over every sequence of length <= 4.

Outcome CheckBioRepair() {
  auto start = Clock::now();
  const EntityKind skill = EntityKind::kSkill;
  const EntityKind occ = EntityKind::kOccupation;
  const std::vector<BioLabel> alphabet = {BioLabel::O(), BioLabel::B(skill),
                                          BioLabel::I(skill), BioLabel::B(occ),
                                          BioLabel::I(occ)};
  size_t count = 0;
  for (size_t len = 0; len <= 4; ++len) {
    size_t total = 1;
    for (size_t i = 0; i < len; ++i) total *= alphabet.size();
    for (size_t code = 0; code < total; ++code) {
      std::vector<BioLabel> seq;
      for (size_t i = 0, c = code; i < len; ++i, c /= alphabet.size()) {
        seq.push_back(alphabet[c % alphabet.size()]);
      }
      std::vector<BioLabel> fixed = RepairBio(seq);
      if (fixed.size() != len || !IsValidBio(fixed)) {
        return Outcome::Fail("invalid output for sequence " +
                             std::to_string(code) + " of length " +
                             std::to_string(len));
      }
      if (RepairBio(fixed) != fixed) return Outcome::Fail("not idempotent");
      if (len == 4) ++count;
    }
  }
  if (count != 625) return Outcome::Fail("enumerated " + std::to_string(count));

  const BioLabel b = BioLabel::B(skill), i = BioLabel::I(skill),
                 o = BioLabel::O();
  if (RepairBio({b, o, i}) != std::vector<BioLabel>{b, i, i}) {
    return Outcome::Fail("[B,O,I] is not repaired to [B,I,I]");
  }
  if (RepairBio({o, i}) != std::vector<BioLabel>{o, o} ||
      RepairBio({i}) != std::vector<BioLabel>{o}) {
    return Outcome::Fail("a sentence-final lone I is not turned into O");
  }
  double t = Seconds(start);
  if (t >= 1.0) return Outcome::Fail("took " + std::to_string(t) + " s");
  return Outcome::Pass();
}

// ---------------------------------------------------------------------------
// Jaccard attribution against a brute-force argmax.

TokenSet RandomTokens(std::mt19937_64 &rng) {
  size_t start = std::uniform_int_distribution<size_t>(0, 25)(rng);
  size_t len = std::uniform_int_distribution<size_t>(1, 4)(rng);
  TokenSet s;
  for (size_t t = start; t < start + len; ++t) s.insert(t);
  return s;
}

Outcome CheckAttribution() {
  auto start = Clock::now();
  std::mt19937_64 rng(7);
  size_t unk_cases = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<GoldSpan> gold(
        std::uniform_int_distribution<size_t>(0, 10)(rng));
    for (size_t g = 0; g < gold.size(); ++g) {
      gold[g] = {RandomTokens(rng), "L" + std::to_string(g)};
    }
    std::vector<TokenSet> mentions(
        std::uniform_int_distribution<size_t>(0, 6)(rng));
    for (TokenSet &m : mentions) m = RandomTokens(rng);

    std::vector<Attribution> got = AttributeMentions(mentions, gold);
    if (got.size() != mentions.size()) return Outcome::Fail("size");
    for (size_t m = 0; m < mentions.size(); ++m) {
      // Oracle: exact overlap ratios compared by cross-multiplication.
      std::optional<size_t> best;
      size_t best_num = 0, best_den = 1;
      for (size_t g = 0; g < gold.size(); ++g) {
        size_t inter = 0;
        for (size_t t : mentions[m]) inter += gold[g].tokens.count(t);
        size_t uni = mentions[m].size() + gold[g].tokens.size() - inter;
        if (inter == 0) continue;
        bool better = !best || inter * best_den > best_num * uni;
        bool tie = best && inter * best_den == best_num * uni;
        if (tie && *gold[g].tokens.begin() < *gold[*best].tokens.begin()) {
          better = true;
        }
        if (better) {
          best = g;
          best_num = inter;
          best_den = uni;
        }
      }
      if (!best) {
        ++unk_cases;
        if (got[m].gold_span || got[m].label != kUnk) {
          return Outcome::Fail("zero overlap did not yield UNK");
        }
        continue;
      }
      if (got[m].gold_span != best || got[m].label != gold[*best].label ||
          std::fabs(got[m].jaccard -
                    static_cast<double>(best_num) / best_den) > 1e-12) {
        return Outcome::Fail("trial " + std::to_string(trial) + " mention " +
                             std::to_string(m));
      }
    }
  }
  if (unk_cases == 0) return Outcome::Fail("no zero-overlap case generated");
  double t = Seconds(start);
  if (t >= 5.0) return Outcome::Fail("took " + std::to_string(t) + " s");
  return Outcome::Pass();
}

// ---------------------------------------------------------------------------
// Strict span F1.

Outcome CheckSpanF1() {
  const EntityKind s = EntityKind::kSkill;
  // Two predictions, one of which matches the single gold span.
  SpanScores worked = SpanF1Strict({{0, 2, s}, {3, 4, s}}, {{0, 2, s}});
  if (worked.precision != 0.5 || worked.recall != 1.0 ||
      std::fabs(worked.f1 - 2.0 / 3.0) > 1e-12) {
    return Outcome::Fail("worked case");
  }
  std::mt19937_64 rng(11);
  auto random_spans = [&rng] {
    std::vector<LabeledSpan> spans(
        std::uniform_int_distribution<size_t>(1, 6)(rng));
    for (LabeledSpan &sp : spans) {
      sp.start = std::uniform_int_distribution<size_t>(0, 4)(rng);
      sp.end = sp.start + std::uniform_int_distribution<size_t>(1, 2)(rng);
      sp.kind = std::uniform_int_distribution<int>(0, 1)(rng)
                    ? EntityKind::kSkill
                    : EntityKind::kOccupation;
    }
    return spans;
  };
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<LabeledSpan> pred = random_spans(), gold = random_spans();
    // Naive recount: each gold span may be claimed once.
    std::vector<bool> used(gold.size(), false);
    size_t tp = 0;
    for (const LabeledSpan &p : pred) {
      for (size_t g = 0; g < gold.size(); ++g) {
        if (!used[g] && gold[g].start == p.start && gold[g].end == p.end &&
            gold[g].kind == p.kind) {
          used[g] = true;
          ++tp;
          break;
        }
      }
    }
    double precision = static_cast<double>(tp) / pred.size();
    double recall = static_cast<double>(tp) / gold.size();
    double f1 = tp == 0 ? 0.0 : 2.0 * tp / (pred.size() + gold.size());
    SpanScores got = SpanF1Strict(pred, gold);
    if (got.true_positives != tp || std::fabs(got.precision - precision) > 1e-12 ||
        std::fabs(got.recall - recall) > 1e-12 ||
        std::fabs(got.f1 - f1) > 1e-12) {
      return Outcome::Fail("random case " + std::to_string(trial));
    }
  }
  return Outcome::Pass();
}

// ---------------------------------------------------------------------------
// Ingestion counts on the official exports, when present.

std::optional<fs::path> EscoDir() {
  if (const char *dir = std::getenv("TAXOLINK_ESCO_DIR")) return fs::path(dir);
  fs::path local = fs::path(TAXOLINK_SOURCE_DIR) / "data" / "esco";
  if (fs::exists(local)) return local;
  return std::nullopt;
}

Outcome CheckIngestionCounts() {
  std::optional<fs::path> dir = EscoDir();
  if (!dir) {
    return Outcome::Skip(
        "no ESCO exports (set TAXOLINK_ESCO_DIR or add data/esco/)");
  }
  const fs::path occupations = *dir / "occupations_en.csv";
  const fs::path skills = *dir / "skills_en.csv";
  const fs::path eqf = *dir / "eqf.csv";
  std::vector<std::string> checked, missing;
  try {
    if (fs::exists(occupations)) {
      size_t n = LoadOccupations(occupations).size();
      if (n != 3007) return Outcome::Fail("occupations=" + std::to_string(n));
      checked.push_back("occupations");
    } else {
      missing.push_back(occupations.filename().string());
    }
    if (fs::exists(skills)) {
      size_t n = LoadSkills(skills).size();
      if (n != 13896) return Outcome::Fail("skills=" + std::to_string(n));
      checked.push_back("skills");
    } else {
      missing.push_back(skills.filename().string());
    }
    if (fs::exists(eqf)) {
      ReferenceSet set = LoadEqf(eqf);
      if (set.size() != 814) {
        return Outcome::Fail("eqf=" + std::to_string(set.size()));
      }
      const std::map<int, size_t> expected = {{1, 40},  {2, 88},  {3, 89},
                                              {4, 166}, {5, 115}, {6, 128},
                                              {7, 117}, {8, 74}};
      if (CountByLevel(set) != expected) {
        return Outcome::Fail("EQF per-level counts differ");
      }
      checked.push_back("eqf");
    } else {
      missing.push_back(eqf.filename().string());
    }
  } catch (const std::exception &e) {
    return Outcome::Fail(e.what());
  }
  if (checked.empty()) {
    return Outcome::Skip("no export files found in " + dir->string());
  }
  if (!missing.empty()) {
    std::string list;
    for (const std::string &m : missing) list += " " + m;
    return Outcome::Skip("checked what was present; missing:" + list);
  }
  return Outcome::Pass();
}

// ---------------------------------------------------------------------------
// Record counts per strategy on a five-node taxonomy.

Outcome CheckStrategyCardinality() {
  struct Spec {
    bool description;
    size_t alts;
  };
  const Spec specs[] = {{true, 0}, {false, 1}, {true, 2}, {true, 3}, {false, 5}};
  std::vector<TaxonomyNode> nodes;
  for (size_t n = 0; n < 5; ++n) {
    TaxonomyNode node;
    node.id = "c" + std::to_string(n);
    node.preferred_label = "label " + std::to_string(n);
    if (specs[n].description) node.description = "does task " + std::to_string(n);
    for (size_t a = 0; a < specs[n].alts; ++a) {
      node.alt_labels.push_back("alt " + std::to_string(n) + " " +
                                std::to_string(a));
    }
    nodes.push_back(node);
  }
  ReferenceSet set(EntityKind::kOccupation, nodes);
  HashingProvider provider(8, 1);
  // Totals worked out by hand from the table above.
  const std::map<EmbeddingStrategy, size_t> totals = {
      {EmbeddingStrategy::kPreferredLabel, 5},
      {EmbeddingStrategy::kDescription, 5},
      {EmbeddingStrategy::kLabelPlusDescription, 5},
      {EmbeddingStrategy::kMultiCombinedFields, 12},
      {EmbeddingStrategy::kMultiSeparateAltLabels, 19}};
  for (const auto &[strategy, total] : totals) {
    std::vector<EmbeddingRecord> records =
        BuildEmbeddings(set, strategy, provider);
    if (records.size() != total) {
      return Outcome::Fail(StrategyName(strategy) + ": " +
                           std::to_string(records.size()) + " records, want " +
                           std::to_string(total));
    }
    for (size_t n = 0; n < 5; ++n) {
      size_t d = specs[n].description ? 1 : 0;
      size_t want = 1;
      if (strategy == EmbeddingStrategy::kMultiCombinedFields) {
        want = 1 + d + (specs[n].alts > 0 ? 1 : 0);
      } else if (strategy == EmbeddingStrategy::kMultiSeparateAltLabels) {
        want = 1 + d + specs[n].alts;
      }
      size_t have = std::count_if(
          records.begin(), records.end(),
          [&](const EmbeddingRecord &r) { return r.node_id == nodes[n].id; });
      if (have != want) {
        return Outcome::Fail(StrategyName(strategy) + " node " + nodes[n].id);
      }
    }
  }
  return Outcome::Pass();
}

// ---------------------------------------------------------------------------
// Two full command-line runs produce identical bytes.

std::string Quote(const fs::path &p) { return "'" + p.string() + "'"; }

// Runs the pipeline in `dir` and returns the output files by name.
std::map<std::string, std::string> RunPipeline(const fs::path &dir,
                                               std::string &error) {
  const std::string bin = TAXOLINK_BIN;
  const fs::path conf = testing::DataPath("run.conf");
  const fs::path docs = testing::DataPath("docs.jsonl");
  const std::string common =
      " --config " + Quote(conf) + " --cache-dir " + Quote(dir / "cache");
  const std::vector<std::pair<std::string, std::string>> steps = {
      {"ingest.txt", "ingest" + common},
      {"embed.txt", "embed" + common + " --strategy s5"},
      {"link_sl.txt", "link" + common + " --strategy s5 --mode sl --input " +
                          Quote(docs) + " --out " + Quote(dir / "sl.jsonl")},
      {"link_el.txt", "link" + common + " --strategy s5 --mode el --jobs 3 --input " +
                          Quote(docs) + " --out " + Quote(dir / "el.jsonl")},
      {"eval_sl.txt", "eval" + common + " --mode sl --results " +
                          Quote(dir / "sl.jsonl") + " --out " +
                          Quote(dir / "eval_sl.json")},
      {"eval_el.txt", "eval" + common + " --mode el --results " +
                          Quote(dir / "el.jsonl") + " --out " +
                          Quote(dir / "eval_el.json")},
  };
  for (const auto &[log, args] : steps) {
    std::string cmd = Quote(bin) + " " + args + " > " + Quote(dir / log) +
                      " 2> " + Quote(dir / (log + ".err"));
    if (std::system(cmd.c_str()) != 0) {
      error = "command failed: " + args;
      return {};
    }
  }
  std::map<std::string, std::string> files;
  for (const auto &entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    files[fs::relative(entry.path(), dir).string()] =
        testing::ReadFile(entry.path());
  }
  return files;
}

Outcome CheckDeterminism() {
  testing::TempDir a, b;
  std::string error;
  auto first = RunPipeline(a.path(), error);
  if (!error.empty()) return Outcome::Fail(error);
  auto second = RunPipeline(b.path(), error);
  if (!error.empty()) return Outcome::Fail(error);
  if (first.size() < 12) {
    return Outcome::Fail("expected outputs missing");
  }
  for (const auto &[name, bytes] : first) {
    auto it = second.find(name);
    if (it == second.end() || it->second != bytes) {
      return Outcome::Fail(name + " differs between runs");
    }
  }
  if (first.size() != second.size()) return Outcome::Fail("file sets differ");
  if (first.at("sl.jsonl").empty() || first.at("el.jsonl").empty()) {
    return Outcome::Fail("empty link output");
  }
  return Outcome::Pass();
}

// ---------------------------------------------------------------------------
// Every node retrieves itself from its own label.

Outcome CheckSelfRetrieval() {
  std::vector<TaxonomyNode> nodes;
  for (int n = 0; n < 50; ++n) {
    TaxonomyNode node;
    node.id = "self" + std::to_string(n);
    node.preferred_label = "role" + std::to_string(n) + " specialist" +
                           std::to_string(n * 7 + 3);
    nodes.push_back(node);
  }
  ReferenceSet set(EntityKind::kOccupation, nodes);
  HashingProvider provider(64, 99);
  VectorIndex index(
      BuildEmbeddings(set, EmbeddingStrategy::kPreferredLabel, provider));
  std::vector<AccuracyRecord> records;
  for (const TaxonomyNode &node : nodes) {
    LinkResult result = LinkSentence(
        {node.preferred_label, EntityKind::kOccupation, 5}, index, provider);
    if (result.candidates.empty()) return Outcome::Fail("no candidates");
    const RankedCandidate &top = result.candidates.front();
    if (top.node_id != node.id || std::fabs(top.score - 1.0) > 1e-6) {
      return Outcome::Fail(node.id + " retrieved " + top.node_id);
    }
    AccuracyRecord record;
    for (const RankedCandidate &c : result.candidates) {
      record.ranked.push_back(c.node_id);
    }
    record.gold = {node.id};
    records.push_back(std::move(record));
  }
  double accuracy = AccuracyAt1(records);
  if (accuracy != 1.0) {
    return Outcome::Fail("Accuracy@1 = " + std::to_string(accuracy));
  }
  return Outcome::Pass();
}

int Main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> checks = {
      {"vector index matches brute-force ranking", CheckVectorIndex},
      {"BIO repair is valid, idempotent and fixes quoted patterns",
       CheckBioRepair},
      {"Jaccard attribution matches brute-force argmax", CheckAttribution},
      {"strict span F1 worked and random cases", CheckSpanF1},
      {"reference ingestion counts", CheckIngestionCounts},
      {"embedding record counts per strategy", CheckStrategyCardinality},
      {"two CLI runs give identical bytes", CheckDeterminism},
      {"self-retrieval at rank 1", CheckSelfRetrieval},
  };
  int failures = 0;
  for (const auto &[name, check] : checks) {
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception &e) {
      outcome = Outcome::Fail(std::string("exception: ") + e.what());
    }
    if (!outcome.failure.empty()) {
      ++failures;
      std::cout << "FAIL " << name << ": " << outcome.failure << "\n";
    } else if (!outcome.skip.empty()) {
      std::cout << "SKIP " << name << ": " << outcome.skip << "\n";
    } else {
      std::cout << "PASS " << name << "\n";
    }
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace taxolink

int main() { return taxolink::Main(); }
