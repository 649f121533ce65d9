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

#ifndef TAXOLINK_LINE_CHANNEL_H_
#define TAXOLINK_LINE_CHANNEL_H_

#include <memory>
#include <string>
#include <string_view>

namespace taxolink {

// A request/response pipe for newline-delimited JSON. One request line is
// answered by exactly one response line. Not thread-safe; open one channel
// per worker.
class LineChannel {
 public:
  virtual ~LineChannel() = default;

  // Sends `line` (which must not contain '\n') and returns the reply
  // without its trailing newline. Throws ProviderError on I/O failure.
  virtual std::string RoundTrip(std::string_view line) = 0;
};

// Opens a channel from an address:
//
//   tcp://HOST:PORT   or  HOST:PORT   TCP connection
//   stdio:COMMAND                     spawn COMMAND via /bin/sh, talk over
//                                     its stdin/stdout
//
// Throws ProviderError when the address is malformed or unreachable.
std::unique_ptr<LineChannel> OpenLineChannel(std::string_view address);

}  // namespace taxolink

#endif  // TAXOLINK_LINE_CHANNEL_H_
