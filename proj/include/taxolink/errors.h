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

#ifndef TAXOLINK_ERRORS_H_
#define TAXOLINK_ERRORS_H_

#include <stdexcept>
#include <string>

namespace taxolink {

// Base class for all errors raised by the engine. Preconditions on
// arguments are reported with std::invalid_argument instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reference-set ingestion failed: unreadable file, bad schema or bad row.
class IngestError : public Error {
 public:
  using Error::Error;
};

// A lookup by id found nothing.
class NotFoundError : public Error {
 public:
  NotFoundError(const std::string &what, std::string key)
      : Error(what), key_(std::move(key)) {}
  const std::string &key() const { return key_; }

 private:
  std::string key_;
};

// Malformed binary or JSON input (embedding cache, annotation files, ...).
class FormatError : public Error {
 public:
  using Error::Error;
};

// Embedding provider or sequence labeler failed or broke its contract.
class ProviderError : public Error {
 public:
  using Error::Error;
};

// Evaluation inputs do not line up (instance ids, empty sets).
class EvalError : public Error {
 public:
  using Error::Error;
};

}  // namespace taxolink

#endif  // TAXOLINK_ERRORS_H_
