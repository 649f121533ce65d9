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

#include "taxolink/config.h"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "strings.h"
#include "taxolink/errors.h"

namespace taxolink {

namespace fs = std::filesystem;

namespace {

fs::path Resolve(const fs::path &base, std::string_view value) {
  fs::path p{std::string(value)};
  if (p.is_relative() && !base.empty()) p = base / p;
  return p.lexically_normal();
}

// "replay:rel/path" -> "replay:/base/rel/path". Other specs pass through.
std::string ResolveSpec(const fs::path &base, std::string_view spec) {
  for (std::string_view prefix : {"replay:", "gold:"}) {
    if (spec.starts_with(prefix)) {
      return std::string(prefix) +
             Resolve(base, spec.substr(prefix.size())).string();
    }
  }
  return std::string(spec);
}

size_t ParseCount(std::string_view key, std::string_view value) {
  size_t n = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw std::invalid_argument(std::string(key) + ": not a number: '" +
                                std::string(value) + "'");
  }
  return n;
}

std::string_view Unquote(std::string_view value) {
  if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
    return value.substr(1, value.size() - 2);
  }
  return value;
}

}  // namespace

std::vector<EntityKind> RunConfig::SelectedKinds() const {
  if (kind) return {*kind};
  std::vector<EntityKind> kinds;
  for (const auto &[k, path] : references) kinds.push_back(k);
  return kinds;
}

fs::path RunConfig::CachePath(EntityKind k) const {
  return cache_dir / (std::string(KindName(k)) + "." +
                      StrategyName(strategy) + ".txlk");
}

void SetConfigValue(RunConfig &config, std::string_view key,
                    std::string_view value, const fs::path &base_dir) {
  if (key == "occupations" || key == "skills" || key == "qualifications") {
    config.references[*ParseKind(key)] = Resolve(base_dir, value);
  } else if (key == "cache_dir") {
    config.cache_dir = Resolve(base_dir, value);
  } else if (key == "strategy") {
    auto strategy = ParseStrategy(value);
    if (!strategy) {
      throw std::invalid_argument("unknown strategy '" + std::string(value) +
                                  "'");
    }
    config.strategy = *strategy;
  } else if (key == "k") {
    config.k = ParseCount(key, value);
  } else if (key == "batch_size") {
    config.batch_size = ParseCount(key, value);
    if (config.batch_size == 0) {
      throw std::invalid_argument("batch_size must be at least 1");
    }
  } else if (key == "provider") {
    config.provider = ResolveSpec(base_dir, value);
  } else if (key == "labeler") {
    config.labeler = ResolveSpec(base_dir, value);
  } else if (key == "kind") {
    auto kind = ParseKind(value);
    if (!kind) {
      throw std::invalid_argument("unknown entity kind '" +
                                  std::string(value) + "'");
    }
    config.kind = *kind;
  } else if (key == "documents") {
    config.documents = Resolve(base_dir, value);
  } else if (key == "gold") {
    config.gold = Resolve(base_dir, value);
  } else {
    throw std::invalid_argument("unknown config key '" + std::string(key) +
                                "'");
  }
}

RunConfig ParseConfig(std::string_view text, const fs::path &base_dir) {
  RunConfig config;
  std::istringstream in{std::string(text)};
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = Trim(line);
    if (view.empty() || view.front() == '#') continue;
    size_t eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected key = value");
    }
    std::string_view key = Trim(view.substr(0, eq));
    std::string_view value = Unquote(Trim(view.substr(eq + 1)));
    try {
      SetConfigValue(config, key, value, base_dir);
    } catch (const std::invalid_argument &e) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": " + e.what());
    }
  }
  return config;
}

RunConfig LoadConfig(const fs::path &path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return ParseConfig(text.str(), path.parent_path());
}

bool IsServiceSpec(std::string_view spec) {
  return !spec.empty() && !spec.starts_with("replay:") &&
         !spec.starts_with("gold:") && !spec.starts_with("hash:") &&
         spec != "hash";
}

void ApplyBridgeOverride(RunConfig &config,
                         const std::optional<std::string> &bridge_addr) {
  if (!bridge_addr || bridge_addr->empty()) return;
  if (IsServiceSpec(config.provider)) config.provider = *bridge_addr;
  if (IsServiceSpec(config.labeler)) config.labeler = *bridge_addr;
}

void ValidateConfig(const RunConfig &config) {
  if (config.k == 0) throw std::invalid_argument("k must be at least 1");
  auto require = [](const fs::path &path, std::string_view what) {
    if (!fs::exists(path)) {
      throw std::invalid_argument(std::string(what) + " not found: " +
                                  path.string());
    }
  };
  for (const auto &[kind, path] : config.references) {
    if (!fs::exists(path)) {
      throw IngestError(std::string(KindName(kind)) + " file not found: " +
                        path.string());
    }
  }
  if (config.kind && !config.references.contains(*config.kind)) {
    throw std::invalid_argument("no " + std::string(KindName(*config.kind)) +
                                " file configured");
  }
  if (config.documents) require(*config.documents, "documents file");
  if (config.gold) require(*config.gold, "evaluation set");
}

}  // namespace taxolink
