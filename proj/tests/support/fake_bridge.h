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

#ifndef TAXOLINK_TESTS_SUPPORT_FAKE_BRIDGE_H_
#define TAXOLINK_TESTS_SUPPORT_FAKE_BRIDGE_H_

#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "taxolink/providers.h"

namespace taxolink::testing {

// Stand-in for the model bridge. Speaks both line protocols; the
// misbehaviour switches exercise client error paths.
struct FakeBridgeOptions {
  size_t dim = 8;
  bool error = false;        // every reply is {"error": ...}
  bool garbage = false;      // replies are not JSON
  bool drift_dim = false;    // later replies change dim
  bool short_reply = false;  // one vector or label too few
  bool bad_label = false;    // labels outside the BIO vocabulary
};

// Per-connection state: counts requests for drift_dim.
class FakeBridge {
 public:
  explicit FakeBridge(FakeBridgeOptions options)
      : options_(options) {}

  std::string Reply(const std::string &line) {
    using nlohmann::json;
    ++requests_;
    if (options_.garbage) return "<html>busy</html>";
    if (options_.error) return json{{"error", "model not loaded"}}.dump();
    json request;
    try {
      request = json::parse(line);
    } catch (const json::exception &) {
      return json{{"error", "malformed request"}}.dump();
    }
    std::string op = request.value("op", "");
    if (op == "embed") {
      std::vector<std::string> texts = request.at("texts");
      size_t dim = options_.dim;
      if (options_.drift_dim && requests_ > 1) ++dim;
      json vectors = json::array();
      if (!texts.empty()) {
        HashingProvider embedder(dim, 7);
        for (const EmbeddingVector &v : embedder.Embed(texts)) {
          vectors.push_back(std::vector<float>(v.values().begin(),
                                               v.values().end()));
        }
      }
      if (options_.short_reply && !vectors.empty()) vectors.erase(0);
      return json{{"vectors", vectors}, {"dim", dim}}.dump();
    }
    if (op == "label") {
      static const std::map<std::string, std::string> kLexicon = {
          {"Java", "Skill"},        {"Python", "Skill"},
          {"SQL", "Skill"},         {"developer", "Occupation"},
          {"nurse", "Occupation"},  {"Bachelor", "Qualification"}};
      json labels = json::array();
      for (const json &sentence : request.at("tokens")) {
        json row = json::array();
        for (const json &token : sentence) {
          auto it = kLexicon.find(token.get<std::string>());
          if (options_.bad_label) {
            row.push_back("B-Vehicle");
          } else {
            row.push_back(it == kLexicon.end() ? "O" : "B-" + it->second);
          }
        }
        if (options_.short_reply && !row.empty()) row.erase(row.size() - 1);
        labels.push_back(std::move(row));
      }
      return json{{"labels", labels}}.dump();
    }
    return json{{"error", "unknown op"}}.dump();
  }

 private:
  FakeBridgeOptions options_;
  size_t requests_ = 0;
};

}  // namespace taxolink::testing

#endif  // TAXOLINK_TESTS_SUPPORT_FAKE_BRIDGE_H_
