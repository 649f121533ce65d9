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

#include "taxolink/cli.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "strings.h"
#include "taxolink/embedding_cache.h"
#include "taxolink/entity_linking.h"
#include "taxolink/errors.h"
#include "taxolink/evaluation.h"
#include "taxolink/json_io.h"
#include "taxolink/providers.h"
#include "taxolink/sentence_linking.h"
#include "taxolink/vector_index.h"

namespace taxolink {

namespace fs = std::filesystem;
using nlohmann::json;

int ExitCodeFor(const std::exception &e) {
  if (dynamic_cast<const IngestError *>(&e)) return kExitIngest;
  if (dynamic_cast<const ProviderError *>(&e)) return kExitProvider;
  if (dynamic_cast<const EvalError *>(&e)) return kExitEval;
  return kExitFailure;
}

RunConfig BuildConfig(
    const std::optional<fs::path> &config_path,
    const std::vector<std::pair<std::string, std::string>> &overrides,
    const std::optional<std::string> &bridge_addr) {
  RunConfig config = config_path ? LoadConfig(*config_path) : RunConfig{};
  for (const auto &[key, value] : overrides) {
    SetConfigValue(config, key, value, fs::path());
  }
  ApplyBridgeOverride(config, bridge_addr);
  return config;
}

namespace {

std::vector<EntityKind> RequireKinds(const RunConfig &config) {
  std::vector<EntityKind> kinds = config.SelectedKinds();
  if (kinds.empty()) throw IngestError("no reference files configured");
  return kinds;
}

// Provider and labeler construction failures are all reported as provider
// failures, whatever the underlying cause (missing replay file, refused
// connection).
template <typename Fn>
auto Connect(Fn &&fn) {
  try {
    return fn();
  } catch (const ProviderError &) {
    throw;
  } catch (const std::exception &e) {
    throw ProviderError(e.what());
  }
}

std::unique_ptr<EmbeddingProvider> OpenProvider(const RunConfig &config) {
  if (config.provider.empty()) {
    throw std::invalid_argument("no embedding provider configured");
  }
  return Connect([&] { return MakeProvider(config.provider); });
}

std::unique_ptr<SequenceLabeler> OpenLabeler(const RunConfig &config) {
  if (config.labeler.empty()) {
    throw std::invalid_argument("no sequence labeler configured");
  }
  return Connect([&] { return MakeLabeler(config.labeler); });
}

class Output {
 public:
  Output(const std::optional<fs::path> &path, std::ostream &fallback)
      : stream_(&fallback) {
    if (path) {
      file_.open(*path, std::ios::binary | std::ios::trunc);
      if (!file_) throw std::runtime_error("cannot write " + path->string());
      stream_ = &file_;
    }
  }
  std::ostream &stream() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream *stream_;
};

void WriteJsonFile(const fs::path &path, const json &value) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot write " + path.string());
  file << value.dump(2) << "\n";
  if (!file) throw std::runtime_error("cannot write " + path.string());
}

// Everything link needs that is shared between workers.
struct LinkContext {
  std::string mode;
  size_t k = 10;
  std::optional<EntityKind> default_kind;
  std::map<EntityKind, ReferenceSet> sets;
  std::map<EntityKind, VectorIndex> indexes;
  IndexMap index_map;
  CandidateNamer namer;
};

struct Worker {
  std::unique_ptr<EmbeddingProvider> provider;
  std::unique_ptr<SequenceLabeler> labeler;
};

struct LineResult {
  std::string text;
  int code = kExitOk;
};

json LinkOne(const LinkContext &ctx, Worker &worker, const InputDocument &in) {
  const std::string &id = in.doc.id;
  if (ctx.mode == "el") {
    std::vector<Mention> mentions = Recognize(in.doc, *worker.labeler);
    std::vector<MentionLinkResult> results;
    for (const Mention &m : mentions) {
      if (ctx.index_map.contains(m.kind)) {
        results.push_back(
            LinkMention(m, ctx.index_map, *worker.provider, ctx.k));
      } else {
        results.push_back({m, {}});
      }
    }
    return EntityResultToJson(id, results, ctx.namer);
  }
  std::optional<EntityKind> kind = in.kind ? in.kind : ctx.default_kind;
  if (!kind) {
    throw std::invalid_argument("document " + id +
                                " has no kind and several are loaded");
  }
  auto it = ctx.indexes.find(*kind);
  if (it == ctx.indexes.end()) {
    throw NotFoundError("no " + std::string(KindName(*kind)) +
                            " index loaded for document " + id,
                        std::string(KindName(*kind)));
  }
  LinkResult result;
  if (ctx.mode == "title") {
    if (!in.title || IsBlank(*in.title)) {
      throw std::invalid_argument("document " + id + " has no title");
    }
    result = LinkTitle(*in.title, it->second, *worker.provider, ctx.k);
  } else {
    result = LinkSentence({in.doc.text, *kind, ctx.k}, it->second,
                          *worker.provider);
  }
  return SentenceResultToJson(id, ctx.mode, result, ctx.namer);
}

LineResult ProcessLine(const LinkContext &ctx, Worker &worker,
                       const std::string &line, size_t line_no) {
  std::string id = "line " + std::to_string(line_no);
  try {
    json value = json::parse(line);
    if (value.is_object() && value.contains("id")) {
      try {
        id = JsonId(value["id"]);
      } catch (const std::invalid_argument &) {
      }
    }
    InputDocument in = ParseInputDocument(value);
    return {LinkOne(ctx, worker, in).dump(), kExitOk};
  } catch (const json::exception &e) {
    return {ErrorResultToJson(id, e.what()).dump(), kExitFailure};
  } catch (const std::exception &e) {
    return {ErrorResultToJson(id, e.what()).dump(), ExitCodeFor(e)};
  }
}

}  // namespace

void RunIngest(const CommandOptions &options, std::ostream &out) {
  const RunConfig &config = options.config;
  std::string summary;
  std::optional<ReferenceSet> eqf;
  for (EntityKind kind : RequireKinds(config)) {
    ReferenceSet set = LoadReferenceSet(kind, config.references.at(kind));
    if (!summary.empty()) summary += " ";
    summary += std::string(KindName(kind)) + "s=" + std::to_string(set.size());
    if (kind == EntityKind::kQualification) eqf = std::move(set);
  }
  out << summary << "\n";
  if (eqf) {
    out << "eqf_levels";
    for (const auto &[level, count] : CountByLevel(*eqf)) {
      out << " " << level << "=" << count;
    }
    out << "\n";
  }
}

void RunEmbed(const CommandOptions &options, std::ostream &out) {
  const RunConfig &config = options.config;
  std::vector<EntityKind> kinds = RequireKinds(config);
  std::vector<ReferenceSet> sets;
  for (EntityKind kind : kinds) {
    sets.push_back(LoadReferenceSet(kind, config.references.at(kind)));
  }
  std::unique_ptr<EmbeddingProvider> provider = OpenProvider(config);
  fs::create_directories(config.cache_dir);
  BuildOptions build;
  build.batch_size = config.batch_size;
  for (const ReferenceSet &set : sets) {
    EmbeddingCache cache = MakeCache(
        BuildEmbeddings(set, config.strategy, *provider, build), true);
    fs::path path = config.CachePath(set.kind());
    SaveCache(cache, path);
    out << path.filename().string() << " records=" << cache.records.size()
        << " dim=" << cache.dim << "\n";
  }
}

int RunLink(const CommandOptions &options, std::istream &in,
            std::ostream &out) {
  const RunConfig &config = options.config;
  if (options.mode != "sl" && options.mode != "el" &&
      options.mode != "title") {
    throw std::invalid_argument("link needs --mode sl, el or title");
  }
  if (options.jobs == 0) throw std::invalid_argument("jobs must be at least 1");

  LinkContext ctx;
  ctx.mode = options.mode;
  ctx.k = config.k;
  std::vector<EntityKind> kinds = RequireKinds(config);
  if (kinds.size() == 1) ctx.default_kind = kinds.front();
  for (EntityKind kind : kinds) {
    ctx.sets.emplace(kind, LoadReferenceSet(kind, config.references.at(kind)));
  }
  for (EntityKind kind : kinds) {
    fs::path path = config.CachePath(kind);
    EmbeddingCache cache = LoadCache(path);
    const ReferenceSet &set = ctx.sets.at(kind);
    for (const EmbeddingRecord &r : cache.records) {
      if (r.kind != kind || set.Find(r.node_id) == nullptr) {
        throw FormatError(path.string() + ": node " + r.node_id +
                          " is not in the " + std::string(KindName(kind)) +
                          " reference set; rebuild the cache");
      }
    }
    ctx.indexes.emplace(kind, BuildIndex(cache));
  }
  for (const auto &[kind, index] : ctx.indexes) ctx.index_map[kind] = &index;
  for (const auto &[kind, set] : ctx.sets) ctx.namer.Add(&set);

  std::vector<Worker> workers(options.jobs);
  for (Worker &w : workers) {
    w.provider = OpenProvider(config);
    if (ctx.mode == "el") w.labeler = OpenLabeler(config);
  }

  std::ifstream file;
  std::istream *input = &in;
  std::optional<fs::path> input_path =
      options.input ? options.input : config.documents;
  if (input_path) {
    file.open(*input_path);
    if (!file) throw std::runtime_error("cannot read " + input_path->string());
    input = &file;
  }
  Output output(options.out, out);

  const size_t chunk_size = std::max<size_t>(64, options.jobs * 16);
  int exit_code = kExitOk;
  size_t line_no = 0;
  std::vector<std::pair<size_t, std::string>> chunk;
  std::vector<LineResult> results;
  auto flush = [&] {
    results.assign(chunk.size(), LineResult{});
    std::atomic<size_t> next{0};
    auto work = [&](Worker &worker) {
      for (size_t i = next++; i < chunk.size(); i = next++) {
        results[i] = ProcessLine(ctx, worker, chunk[i].second, chunk[i].first);
      }
    };
    if (workers.size() == 1 || chunk.size() == 1) {
      work(workers.front());
    } else {
      std::vector<std::thread> threads;
      for (Worker &w : workers) threads.emplace_back(work, std::ref(w));
      for (std::thread &t : threads) t.join();
    }
    for (const LineResult &r : results) {
      output.stream() << r.text << "\n";
      exit_code = std::max(exit_code, r.code);
    }
    output.stream().flush();
    chunk.clear();
  };
  std::string line;
  while (std::getline(*input, line)) {
    ++line_no;
    if (IsBlank(line)) continue;
    chunk.emplace_back(line_no, std::move(line));
    if (chunk.size() == chunk_size) flush();
  }
  if (!chunk.empty()) flush();
  return exit_code;
}

namespace {

std::vector<GoldInstance> ReadGold(const CommandOptions &options) {
  if (!options.config.gold) {
    throw std::invalid_argument("no evaluation set given (--gold)");
  }
  std::vector<GoldInstance> gold = ReadGoldInstances(*options.config.gold);
  if (options.config.kind) {
    EntityKind kind = *options.config.kind;
    std::erase_if(gold, [&](const GoldInstance &g) { return g.kind != kind; });
  }
  return gold;
}

// With a kind selected, result lines for instances of other kinds are
// dropped instead of being reported as unknown ids.
template <typename T>
void KeepSelected(const CommandOptions &options,
                  const std::vector<GoldInstance> &gold,
                  std::map<std::string, T> &results) {
  if (!options.config.kind) return;
  std::set<std::string> all;
  for (const GoldInstance &g : ReadGoldInstances(*options.config.gold)) {
    all.insert(g.id);
  }
  std::set<std::string> kept;
  for (const GoldInstance &g : gold) kept.insert(g.id);
  std::erase_if(results, [&](const auto &entry) {
    return all.contains(entry.first) && !kept.contains(entry.first);
  });
}

std::vector<EvalReport> Evaluate(const CommandOptions &options,
                                 const std::string &mode,
                                 const fs::path &results_path,
                                 const std::vector<GoldInstance> &gold) {
  if (mode == "el") {
    auto results = ReadEntityResults(results_path);
    KeepSelected(options, gold, results);
    return EvaluateEntityResults(gold, results);
  }
  if (mode == "sl" || mode == "title") {
    auto results = ReadSentenceResults(results_path);
    KeepSelected(options, gold, results);
    return EvaluateSentenceResults(mode, gold, results);
  }
  throw std::invalid_argument("eval needs --mode sl, el or title");
}

}  // namespace

void RunEval(const CommandOptions &options, std::ostream &out) {
  if (!options.results) throw std::invalid_argument("eval needs --results");
  std::vector<GoldInstance> gold = ReadGold(options);
  std::vector<EvalReport> reports =
      Evaluate(options, options.mode, *options.results, gold);
  out << RenderReports(reports);
  if (options.out) {
    json doc = {{"reports", json::array()}};
    for (const EvalReport &r : reports) doc["reports"].push_back(ReportToJson(r));
    WriteJsonFile(*options.out, doc);
  }
}

void RunCompare(const CommandOptions &options, std::ostream &out) {
  if (!options.sl && !options.el && !options.title) {
    throw std::invalid_argument("compare needs at least one of --sl, --el, --title");
  }
  std::vector<GoldInstance> gold = ReadGold(options);
  std::vector<EvalReport> sl, el, title;
  if (options.sl) sl = Evaluate(options, "sl", *options.sl, gold);
  if (options.el) el = Evaluate(options, "el", *options.el, gold);
  if (options.title) title = Evaluate(options, "title", *options.title, gold);
  ComparisonTable table = CompareMethods(sl, el, title);
  out << table.Render();
  if (options.out) WriteJsonFile(*options.out, ComparisonToJson(table));
}

int Dispatch(const std::string &command, const CommandOptions &options,
             std::istream &in, std::ostream &out, std::ostream &err) {
  try {
    ValidateConfig(options.config);
    if (command == "ingest") {
      RunIngest(options, out);
    } else if (command == "embed") {
      RunEmbed(options, out);
    } else if (command == "link") {
      int code = RunLink(options, in, out);
      if (code != kExitOk) {
        err << "taxolink: some documents failed; see error lines\n";
      }
      return code;
    } else if (command == "eval") {
      RunEval(options, out);
    } else if (command == "compare") {
      RunCompare(options, out);
    } else {
      throw std::invalid_argument("unknown command '" + command + "'");
    }
    return kExitOk;
  } catch (const std::exception &e) {
    err << "taxolink: " << e.what() << "\n";
    return ExitCodeFor(e);
  }
}

}  // namespace taxolink
