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

#ifndef TAXOLINK_CSV_H_
#define TAXOLINK_CSV_H_

#include <string>
#include <string_view>
#include <vector>

namespace taxolink {
namespace csv {

using Row = std::vector<std::string>;

// Parses RFC 4180 text. Quoted fields may contain separators, doubled
// quotes and line breaks; both LF and CRLF record endings are accepted. A
// leading UTF-8 byte order mark is skipped. Blank lines are dropped.
// Throws FormatError on an unterminated quoted field.
std::vector<Row> Parse(std::string_view text);

// Quotes a field when it contains a comma, quote, CR or LF.
std::string EscapeField(std::string_view field);

std::string FormatRow(const Row &row);

}  // namespace csv
}  // namespace taxolink

#endif  // TAXOLINK_CSV_H_
