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

#ifndef TAXOLINK_TAXONOMY_H_
#define TAXOLINK_TAXONOMY_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace taxolink {

enum class EntityKind : unsigned char {
  kOccupation = 0,
  kSkill = 1,
  kQualification = 2,
};

inline constexpr EntityKind kAllEntityKinds[] = {
    EntityKind::kOccupation, EntityKind::kSkill, EntityKind::kQualification};

// Lower-case name used in files and on the command line ("occupation").
std::string_view KindName(EntityKind kind);

// Capitalized name used inside BIO labels ("Occupation").
std::string_view KindLabelName(EntityKind kind);

// Accepts either spelling, case-insensitively, plus the plural forms.
std::optional<EntityKind> ParseKind(std::string_view text);

// One ESCO occupation, ESCO skill or EQF qualification row.
struct TaxonomyNode {
  std::string id;
  EntityKind kind = EntityKind::kOccupation;
  std::string preferred_label;
  std::string description;
  std::vector<std::string> alt_labels;
  std::optional<int> eqf_level;
  std::optional<std::string> country;

  // The label retrieval is scored against: the node id for ESCO nodes,
  // "EQF<level>" for qualifications.
  std::string TargetLabel() const;

  bool operator==(const TaxonomyNode &other) const = default;
};

// An immutable collection of nodes of one kind with unique ids.
class ReferenceSet {
 public:
  ReferenceSet(EntityKind kind, std::vector<TaxonomyNode> nodes,
               std::string version_tag = "");

  EntityKind kind() const { return kind_; }
  const std::vector<TaxonomyNode> &nodes() const { return nodes_; }
  const std::string &version_tag() const { return version_tag_; }
  size_t size() const { return nodes_.size(); }

  // Throws NotFoundError naming the id.
  const TaxonomyNode &Get(std::string_view id) const;
  const TaxonomyNode *Find(std::string_view id) const;

  bool operator==(const ReferenceSet &other) const {
    return kind_ == other.kind_ && nodes_ == other.nodes_;
  }

 private:
  EntityKind kind_;
  std::vector<TaxonomyNode> nodes_;
  std::string version_tag_;
  std::unordered_map<std::string, size_t> by_id_;
};

// Loaders for the canonical CSV schemas:
//
//   occupations.csv, skills.csv   id,preferredLabel,altLabels,description
//   eqf.csv                       qualification,country,eqf_level
//
// Columns are matched by header name, so column order is free and extra
// columns are ignored. Official ESCO v1.1.1 exports (occupations_en.csv,
// skills_en.csv) load unchanged: when there is no "id" column the loader
// takes "code" (occupations) and then "conceptUri" as the node id.
//
// All loaders throw IngestError on unreadable files, missing columns,
// duplicate ids and empty labels.
ReferenceSet LoadOccupations(const std::filesystem::path &path);
ReferenceSet LoadSkills(const std::filesystem::path &path);
ReferenceSet LoadEqf(const std::filesystem::path &path);
ReferenceSet LoadReferenceSet(EntityKind kind,
                              const std::filesystem::path &path);

// Same as the loaders above but reading CSV text from memory. `source` is
// used in error messages only.
ReferenceSet ParseEsco(EntityKind kind, std::string_view csv,
                       std::string_view source = "<memory>");
ReferenceSet ParseEqf(std::string_view csv,
                      std::string_view source = "<memory>");

// Writes the canonical CSV for `set`. Loading the output again yields an
// equal set.
std::string ToCanonicalCsv(const ReferenceSet &set);

const TaxonomyNode &GetNode(const ReferenceSet &set, std::string_view id);

// Splits a newline-separated alt-label cell: trims each label, drops
// empties and repeated labels, keeps first-seen order.
std::vector<std::string> SplitAltLabels(std::string_view cell);

// Number of qualifications per EQF level (1..8).
std::map<int, size_t> CountByLevel(const ReferenceSet &set);

}  // namespace taxolink

#endif  // TAXOLINK_TAXONOMY_H_
