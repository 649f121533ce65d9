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

// taxolink: link vacancy text to occupation, skill and qualification
// taxonomies.
//
//   taxolink ingest  --config run.conf
//   taxolink embed   --config run.conf [--strategy s3]
//   taxolink link    --config run.conf --mode sl|el|title [--input docs.jsonl]
//   taxolink eval    --config run.conf --mode sl --results out.jsonl
//   taxolink compare --config run.conf --sl a.jsonl --el b.jsonl

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "taxolink/cli.h"

int main(int argc, char **argv) {
  CLI::App app{"Link job-vacancy text to taxonomy nodes."};
  app.require_subcommand(1);

  std::optional<std::string> config_path;
  std::optional<std::string> kind, strategy, provider, labeler, cache_dir,
      gold;
  std::optional<size_t> k;
  std::optional<std::string> input, out, results, sl, el, title;
  std::string mode;
  size_t jobs = 1;

  auto common = [&](CLI::App *cmd) {
    cmd->add_option("--config", config_path, "Run configuration file");
    cmd->add_option("--kind", kind, "occupation, skill or qualification");
    cmd->add_option("--k", k, "Candidates per query");
    cmd->add_option("--strategy", strategy, "Embedding strategy s1..s5");
    cmd->add_option("--provider", provider, "Embedding provider spec");
    cmd->add_option("--labeler", labeler, "Sequence labeler spec");
    cmd->add_option("--cache-dir", cache_dir, "Embedding cache directory");
    cmd->add_option("--out", out, "Output file");
  };
  CLI::App *ingest = app.add_subcommand("ingest", "Load and check reference sets");
  CLI::App *embed = app.add_subcommand("embed", "Build embedding caches");
  CLI::App *link = app.add_subcommand("link", "Link documents (JSON Lines)");
  CLI::App *eval = app.add_subcommand("eval", "Score a results file");
  CLI::App *compare = app.add_subcommand("compare", "Compare methods");
  for (CLI::App *cmd : {ingest, embed, link, eval, compare}) common(cmd);

  link->add_option("--mode", mode, "sl, el or title")
      ->required()
      ->check(CLI::IsMember({"sl", "el", "title"}));
  link->add_option("--jobs", jobs, "Parallel workers")
      ->check(CLI::PositiveNumber);
  link->add_option("--input", input, "Documents (default: stdin)");

  eval->add_option("--mode", mode, "sl, el or title")
      ->required()
      ->check(CLI::IsMember({"sl", "el", "title"}));
  eval->add_option("--results", results, "Results from link")->required();
  for (CLI::App *cmd : {eval, compare}) {
    cmd->add_option("--gold", gold, "Evaluation set");
  }
  compare->add_option("--sl", sl, "Sentence linking results");
  compare->add_option("--el", el, "Entity linking results");
  compare->add_option("--title", title, "Title linking results");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? taxolink::kExitOk : taxolink::kExitFailure;
  }

  std::vector<std::pair<std::string, std::string>> overrides;
  auto add = [&](const char *key, const std::optional<std::string> &value) {
    if (value) overrides.emplace_back(key, *value);
  };
  add("kind", kind);
  add("strategy", strategy);
  add("provider", provider);
  add("labeler", labeler);
  add("cache_dir", cache_dir);
  add("gold", gold);
  if (k) overrides.emplace_back("k", std::to_string(*k));

  std::optional<std::string> bridge;
  if (const char *env = std::getenv("TAXOLINK_BRIDGE_ADDR")) bridge = env;

  taxolink::CommandOptions options;
  try {
    std::optional<std::filesystem::path> path;
    if (config_path) path = *config_path;
    options.config = taxolink::BuildConfig(path, overrides, bridge);
  } catch (const std::exception &e) {
    std::cerr << "taxolink: " << e.what() << "\n";
    return taxolink::ExitCodeFor(e);
  }
  options.mode = mode;
  options.jobs = jobs;
  if (input) options.input = *input;
  if (out) options.out = *out;
  if (results) options.results = *results;
  if (sl) options.sl = *sl;
  if (el) options.el = *el;
  if (title) options.title = *title;

  std::string command = app.get_subcommands().front()->get_name();
  return taxolink::Dispatch(command, options, std::cin, std::cout, std::cerr);
}
