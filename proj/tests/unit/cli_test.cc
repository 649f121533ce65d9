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

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include <sstream>

#include <nlohmann/json.hpp>

#include "taxolink/embedding_cache.h"
#include "taxolink/json_io.h"
#include "test_util.h"

namespace taxolink {
namespace {

using ::testing::HasSubstr;
using ::testing::StartsWith;
using nlohmann::json;
using testing::DataPath;
using testing::ReadFile;
using testing::TempDir;
using testing::WriteFile;

struct RunOutput {
  int code = 0;
  std::string out;
  std::string err;
};

class CliTest : public ::testing::Test {
 protected:
  CommandOptions Options(
      std::vector<std::pair<std::string, std::string>> overrides = {}) {
    overrides.emplace_back("cache_dir", (dir_ / "cache").string());
    CommandOptions options;
    options.config =
        BuildConfig(DataPath("run.conf"), overrides, std::nullopt);
    return options;
  }

  RunOutput Run(const std::string &command, const CommandOptions &options,
                const std::string &input = "") {
    std::istringstream in(input);
    std::ostringstream out, err;
    RunOutput r;
    r.code = Dispatch(command, options, in, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
  }

  // Builds caches for every configured kind.
  void Embed(CommandOptions options) {
    RunOutput r = Run("embed", options);
    ASSERT_EQ(r.code, kExitOk) << r.err;
  }

  std::vector<json> Lines(const std::string &text) {
    std::vector<json> lines;
    std::istringstream in(text);
    ForEachJsonLine(in, "output",
                    [&](const json &value, size_t) { lines.push_back(value); });
    return lines;
  }

  TempDir dir_;
};

TEST_F(CliTest, IngestSummary) {
  RunOutput r = Run("ingest", Options());
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out,
            "occupations=5 skills=6 qualifications=10\n"
            "eqf_levels 1=1 2=1 3=1 4=1 5=1 6=2 7=2 8=1\n");
}

TEST_F(CliTest, IngestOfSelectedKind) {
  RunOutput r = Run("ingest", Options({{"kind", "skill"}}));
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out, "skills=6\n");
}

TEST_F(CliTest, MissingReferenceFileIsIngestError) {
  std::string missing = (dir_ / "nope.csv").string();
  RunOutput r = Run("ingest", Options({{"skills", missing}}));
  EXPECT_EQ(r.code, kExitIngest);
  EXPECT_THAT(r.err, HasSubstr(missing));
}

TEST_F(CliTest, MalformedReferenceFileIsIngestError) {
  WriteFile(dir_ / "bad.csv", "foo,bar\n1,2\n");
  RunOutput r =
      Run("ingest", Options({{"skills", (dir_ / "bad.csv").string()}}));
  EXPECT_EQ(r.code, kExitIngest);
}

TEST_F(CliTest, EmbedWritesCachesAndIsRepeatable) {
  CommandOptions options = Options({{"strategy", "s5"}});
  RunOutput first = Run("embed", options);
  ASSERT_EQ(first.code, kExitOk) << first.err;
  EXPECT_EQ(first.out,
            "occupation.s5.txlk records=16 dim=16\n"
            "skill.s5.txlk records=20 dim=16\n"
            "qualification.s5.txlk records=10 dim=16\n");
  std::string bytes = ReadFile(options.config.CachePath(EntityKind::kSkill));
  EmbeddingCache cache =
      LoadCache(options.config.CachePath(EntityKind::kSkill));
  EXPECT_EQ(cache.records.size(), 20u);
  ASSERT_EQ(Run("embed", options).code, kExitOk);
  EXPECT_EQ(ReadFile(options.config.CachePath(EntityKind::kSkill)), bytes);
}

TEST_F(CliTest, LinkWithoutCacheFails) {
  CommandOptions options = Options();
  options.mode = "sl";
  RunOutput r = Run("link", options, "{\"id\":\"a\",\"text\":\"x\"}\n");
  EXPECT_EQ(r.code, kExitFailure);
  EXPECT_THAT(r.err, HasSubstr(".txlk"));
}

TEST_F(CliTest, EmptyInputGivesEmptyOutput) {
  CommandOptions options = Options();
  Embed(options);
  options.mode = "sl";
  RunOutput r = Run("link", options, "\n\n");
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out, "");
}

TEST_F(CliTest, SentenceLinkingKeepsInputOrder) {
  CommandOptions options = Options();
  Embed(options);
  options.mode = "sl";
  std::string docs = ReadFile(DataPath("docs.jsonl"));
  RunOutput r = Run("link", options, docs);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::vector<json> lines = Lines(r.out);
  std::vector<json> inputs = Lines(docs);
  ASSERT_EQ(lines.size(), inputs.size());
  for (size_t i = 0; i < lines.size(); ++i) {
    EXPECT_EQ(lines[i]["id"], inputs[i]["id"]);
    EXPECT_EQ(lines[i]["kind"], inputs[i]["kind"]);
    EXPECT_EQ(lines[i]["mode"], "sl");
    EXPECT_EQ(lines[i]["candidates"].size(),
              5u);
    for (size_t j = 1; j < lines[i]["candidates"].size(); ++j) {
      EXPECT_GE(lines[i]["candidates"][j - 1]["score"].get<double>(),
                lines[i]["candidates"][j]["score"].get<double>());
    }
  }
}

TEST_F(CliTest, EntityLinkingFollowsAnnotations) {
  CommandOptions options = Options();
  Embed(options);
  options.mode = "el";
  RunOutput r = Run("link", options, ReadFile(DataPath("docs.jsonl")));
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::vector<json> lines = Lines(r.out);
  ASSERT_EQ(lines.size(), 6u);
  const json &d2 = lines[1];
  ASSERT_EQ(d2["id"], "d2");
  std::vector<std::string> surfaces;
  for (const json &m : d2["mentions"]) {
    surfaces.push_back(m["surface"]);
  }
  EXPECT_EQ(surfaces, (std::vector<std::string>{"registered nurse",
                                                "Patient care", "teamwork"}));
  EXPECT_EQ(d2["mentions"][1]["token_span"], json::array({9, 11}));
  EXPECT_EQ(d2["mentions"][1]["candidates"][0]["node_id"], "s3");
  EXPECT_EQ(d2["mentions"][0]["candidates"][0]["node_id"], "o3");
}

TEST_F(CliTest, ParallelOutputMatchesSerial) {
  CommandOptions options = Options();
  Embed(options);
  // Enough lines to span several chunks. Ids repeat because the gold
  // labeler is keyed by document id.
  std::string docs = ReadFile(DataPath("docs.jsonl"));
  std::string many;
  for (int copy = 0; copy < 30; ++copy) many += docs;
  for (const char *mode : {"sl", "el", "title"}) {
    options.mode = mode;
    options.jobs = 1;
    RunOutput serial = Run("link", options, many);
    options.jobs = 4;
    RunOutput parallel = Run("link", options, many);
    ASSERT_EQ(serial.code, kExitOk) << serial.err;
    EXPECT_EQ(parallel.code, kExitOk);
    EXPECT_EQ(Lines(serial.out).size(), 180u);
    EXPECT_EQ(parallel.out, serial.out) << mode;
  }
}

TEST_F(CliTest, BadDocumentLinesBecomeErrorLines) {
  CommandOptions options = Options();
  Embed(options);
  options.mode = "title";
  std::string input =
      "{\"id\":\"a\",\"kind\":\"skill\",\"title\":\"Python\"}\n"
      "{not json\n"
      "{\"id\":\"b\",\"kind\":\"skill\",\"text\":\"no title\"}\n";
  RunOutput r = Run("link", options, input);
  EXPECT_NE(r.code, kExitOk);
  std::vector<json> lines = Lines(r.out);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0]["candidates"][0]["node_id"], "s2");
  EXPECT_TRUE(lines[1].contains("error"));
  EXPECT_EQ(lines[2]["id"], "b");
  EXPECT_TRUE(lines[2].contains("error"));
  EXPECT_THAT(r.err, HasSubstr("failed"));
}

TEST_F(CliTest, UnreachableProviderIsExitThree) {
  CommandOptions options = Options({{"provider", "tcp://127.0.0.1:1"}});
  RunOutput r = Run("embed", options);
  EXPECT_EQ(r.code, kExitProvider);
  EXPECT_THAT(r.err, StartsWith("taxolink: "));
}

TEST_F(CliTest, BridgeAddressOverride) {
  WriteFile(dir_ / "svc.conf",
            "skills = " + DataPath("skills.csv").string() +
                "\nprovider = tcp://127.0.0.1:1\n");
  CommandOptions options;
  options.config = BuildConfig(
      dir_ / "svc.conf", {{"cache_dir", (dir_ / "c").string()}},
      testing::FakeBridgeAddress("--dim 8"));
  RunOutput r = Run("embed", options);
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out, "skill.s1.txlk records=6 dim=8\n");
}

TEST_F(CliTest, EvalOfGoldShapedResults) {
  std::string results;
  for (const GoldInstance &g : ReadGoldInstances(DataPath("docs.jsonl"))) {
    json line = {{"id", g.id}, {"candidates", json::array()}};
    for (const std::string &label : g.gold_labels) {
      if (label == kUnk) continue;
      line["candidates"].push_back(
          {{"node_id", label}, {"target", label}, {"score", 1.0}});
    }
    results += line.dump() + "\n";
  }
  WriteFile(dir_ / "sl.jsonl", results);
  CommandOptions options = Options();
  options.mode = "sl";
  options.results = dir_ / "sl.jsonl";
  options.out = dir_ / "report.json";
  RunOutput r = Run("eval", options);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  json report = json::parse(ReadFile(dir_ / "report.json"));
  ASSERT_EQ(report["reports"].size(), 3u);
  for (const json &rep : report["reports"]) {
    EXPECT_EQ(rep["accuracy_at_1"], 1.0) << rep["kind"];
  }
  EXPECT_THAT(r.out, HasSubstr("1.0000"));
}

TEST_F(CliTest, EvalWithForeignIdsIsExitFour) {
  WriteFile(dir_ / "sl.jsonl",
            "{\"id\":\"zz\",\"candidates\":[]}\n");
  CommandOptions options = Options();
  options.mode = "sl";
  options.results = dir_ / "sl.jsonl";
  RunOutput r = Run("eval", options);
  EXPECT_EQ(r.code, kExitEval);
}

TEST_F(CliTest, EndToEndEvalAndCompare) {
  CommandOptions options = Options();
  Embed(options);
  std::string docs = ReadFile(DataPath("docs.jsonl"));
  for (const char *mode : {"sl", "el", "title"}) {
    options.mode = mode;
    options.out = dir_ / (std::string(mode) + ".jsonl");
    ASSERT_EQ(Run("link", options, docs).code, kExitOk) << mode;
  }
  options.out.reset();
  options.mode = "el";
  options.results = dir_ / "el.jsonl";
  RunOutput eval = Run("eval", options);
  ASSERT_EQ(eval.code, kExitOk) << eval.err;
  EXPECT_THAT(eval.out, HasSubstr("f1"));

  options.sl = dir_ / "sl.jsonl";
  options.el = dir_ / "el.jsonl";
  options.title = dir_ / "title.jsonl";
  options.out = dir_ / "cmp.json";
  RunOutput cmp = Run("compare", options);
  ASSERT_EQ(cmp.code, kExitOk) << cmp.err;
  EXPECT_THAT(cmp.out, StartsWith("method"));
  EXPECT_THAT(cmp.out, HasSubstr("Entity Linking"));
  json table = json::parse(ReadFile(dir_ / "cmp.json"));
  EXPECT_EQ(table["accuracy_at_1"].size(), 3u);
}

TEST_F(CliTest, UnknownCommand) {
  RunOutput r = Run("frobnicate", Options());
  EXPECT_EQ(r.code, kExitFailure);
  EXPECT_THAT(r.err, HasSubstr("frobnicate"));
}

}  // namespace
}  // namespace taxolink
