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

#ifndef TAXOLINK_CLI_H_
#define TAXOLINK_CLI_H_

#include <exception>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "taxolink/config.h"

namespace taxolink {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitIngest = 2;
inline constexpr int kExitProvider = 3;
inline constexpr int kExitEval = 4;

int ExitCodeFor(const std::exception &e);

struct CommandOptions {
  RunConfig config;
  std::string mode;  // sl, el or title
  size_t jobs = 1;
  std::optional<std::filesystem::path> input;
  std::optional<std::filesystem::path> out;
  std::optional<std::filesystem::path> results;
  std::optional<std::filesystem::path> sl;
  std::optional<std::filesystem::path> el;
  std::optional<std::filesystem::path> title;
};

// Loads the config file (if any), applies `overrides` as config keys on
// top, then the bridge address override.
RunConfig BuildConfig(
    const std::optional<std::filesystem::path> &config_path,
    const std::vector<std::pair<std::string, std::string>> &overrides,
    const std::optional<std::string> &bridge_addr);

// Commands throw on failure. `in` is read by link when neither --input nor
// a configured documents file is given.
void RunIngest(const CommandOptions &options, std::ostream &out);
void RunEmbed(const CommandOptions &options, std::ostream &out);
// Returns the exit code: 0, or the highest code of any failed document.
int RunLink(const CommandOptions &options, std::istream &in, std::ostream &out);
void RunEval(const CommandOptions &options, std::ostream &out);
void RunCompare(const CommandOptions &options, std::ostream &out);

// Runs `command` and turns exceptions into an error message on `err` and
// an exit code.
int Dispatch(const std::string &command, const CommandOptions &options,
             std::istream &in, std::ostream &out, std::ostream &err);

}  // namespace taxolink

#endif  // TAXOLINK_CLI_H_
