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

#include "taxolink/taxonomy.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "strings.h"
#include "taxolink/csv.h"
#include "taxolink/errors.h"

namespace taxolink {

std::string_view KindName(EntityKind kind) {
  switch (kind) {
    case EntityKind::kOccupation:
      return "occupation";
    case EntityKind::kSkill:
      return "skill";
    case EntityKind::kQualification:
      return "qualification";
  }
  return "unknown";
}

std::string_view KindLabelName(EntityKind kind) {
  switch (kind) {
    case EntityKind::kOccupation:
      return "Occupation";
    case EntityKind::kSkill:
      return "Skill";
    case EntityKind::kQualification:
      return "Qualification";
  }
  return "Unknown";
}

std::optional<EntityKind> ParseKind(std::string_view text) {
  std::string lower = AsciiLower(Trim(text));
  if (lower == "occupation" || lower == "occupations") {
    return EntityKind::kOccupation;
  }
  if (lower == "skill" || lower == "skills") return EntityKind::kSkill;
  if (lower == "qualification" || lower == "qualifications" ||
      lower == "eqf") {
    return EntityKind::kQualification;
  }
  return std::nullopt;
}

std::string TaxonomyNode::TargetLabel() const {
  if (kind == EntityKind::kQualification && eqf_level) {
    return "EQF" + std::to_string(*eqf_level);
  }
  return id;
}

ReferenceSet::ReferenceSet(EntityKind kind, std::vector<TaxonomyNode> nodes,
                           std::string version_tag)
    : kind_(kind), nodes_(std::move(nodes)),
      version_tag_(std::move(version_tag)) {
  by_id_.reserve(nodes_.size());
  for (size_t i = 0; i < nodes_.size(); ++i) {
    const TaxonomyNode &node = nodes_[i];
    if (node.kind != kind_) {
      throw IngestError("node " + node.id + " is a " +
                        std::string(KindName(node.kind)) + ", set holds " +
                        std::string(KindName(kind_)) + " nodes");
    }
    if (!by_id_.emplace(node.id, i).second) {
      throw IngestError("duplicate id: " + node.id);
    }
  }
}

const TaxonomyNode *ReferenceSet::Find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  return it == by_id_.end() ? nullptr : &nodes_[it->second];
}

const TaxonomyNode &ReferenceSet::Get(std::string_view id) const {
  const TaxonomyNode *node = Find(id);
  if (node == nullptr) {
    throw NotFoundError("no " + std::string(KindName(kind_)) +
                            " with id: " + std::string(id),
                        std::string(id));
  }
  return *node;
}

const TaxonomyNode &GetNode(const ReferenceSet &set, std::string_view id) {
  return set.Get(id);
}

std::vector<std::string> SplitAltLabels(std::string_view cell) {
  std::vector<std::string> labels;
  std::unordered_set<std::string> seen;
  size_t pos = 0;
  while (pos <= cell.size()) {
    size_t nl = cell.find('\n', pos);
    if (nl == std::string_view::npos) nl = cell.size();
    std::string label(Trim(cell.substr(pos, nl - pos)));
    if (!label.empty() && seen.insert(label).second) {
      labels.push_back(std::move(label));
    }
    pos = nl + 1;
  }
  return labels;
}

std::map<int, size_t> CountByLevel(const ReferenceSet &set) {
  std::map<int, size_t> counts;
  for (int level = 1; level <= 8; ++level) counts[level] = 0;
  for (const TaxonomyNode &node : set.nodes()) {
    if (node.eqf_level) ++counts[*node.eqf_level];
  }
  return counts;
}

namespace {

std::string ReadFile(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IngestError("error reading " + path.string());
  return buffer.str();
}

// Maps header names to column positions.
class Header {
 public:
  Header(const csv::Row &row, std::string_view source) : source_(source) {
    for (size_t i = 0; i < row.size(); ++i) {
      columns_.emplace(std::string(Trim(row[i])), i);
    }
  }

  std::optional<size_t> Find(std::string_view name) const {
    auto it = columns_.find(std::string(name));
    if (it == columns_.end()) return std::nullopt;
    return it->second;
  }

  size_t Require(std::string_view name) const {
    auto col = Find(name);
    if (!col) {
      throw IngestError(source_ + ": missing required column '" +
                        std::string(name) + "'");
    }
    return *col;
  }

 private:
  std::string source_;
  std::unordered_map<std::string, size_t> columns_;
};

std::string_view Cell(const csv::Row &row, size_t col) {
  return col < row.size() ? std::string_view(row[col]) : std::string_view();
}

std::vector<csv::Row> ParseRows(std::string_view text,
                                std::string_view source) {
  try {
    auto rows = csv::Parse(text);
    if (rows.empty()) {
      throw IngestError(std::string(source) + ": missing header row");
    }
    return rows;
  } catch (const FormatError &e) {
    throw IngestError(std::string(source) + ": " + e.what());
  }
}

}  // namespace

ReferenceSet ParseEsco(EntityKind kind, std::string_view text,
                       std::string_view source) {
  if (kind == EntityKind::kQualification) return ParseEqf(text, source);
  std::vector<csv::Row> rows = ParseRows(text, source);
  Header header(rows[0], source);

  size_t id_col;
  if (auto col = header.Find("id")) {
    id_col = *col;
  } else if (auto code = header.Find("code");
             code && kind == EntityKind::kOccupation) {
    id_col = *code;
  } else if (auto uri = header.Find("conceptUri")) {
    id_col = *uri;
  } else {
    id_col = header.Require("id");
  }
  size_t label_col = header.Require("preferredLabel");
  size_t alt_col = header.Require("altLabels");
  size_t desc_col = header.Require("description");

  std::vector<TaxonomyNode> nodes;
  nodes.reserve(rows.size() - 1);
  std::unordered_set<std::string> ids;
  for (size_t r = 1; r < rows.size(); ++r) {
    const csv::Row &row = rows[r];
    TaxonomyNode node;
    node.kind = kind;
    node.id = std::string(Trim(Cell(row, id_col)));
    if (node.id.empty()) {
      throw IngestError(std::string(source) + ": empty id in row " +
                        std::to_string(r));
    }
    if (!ids.insert(node.id).second) {
      throw IngestError(std::string(source) + ": duplicate id '" + node.id +
                        "' in row " + std::to_string(r));
    }
    node.preferred_label = std::string(Cell(row, label_col));
    if (IsBlank(node.preferred_label)) {
      throw IngestError(std::string(source) + ": empty preferred label in row " +
                        std::to_string(r));
    }
    node.description = std::string(Cell(row, desc_col));
    node.alt_labels = SplitAltLabels(Cell(row, alt_col));
    nodes.push_back(std::move(node));
  }
  return ReferenceSet(kind, std::move(nodes));
}

ReferenceSet ParseEqf(std::string_view text, std::string_view source) {
  std::vector<csv::Row> rows = ParseRows(text, source);
  Header header(rows[0], source);
  size_t qual_col = header.Require("qualification");
  size_t country_col = header.Require("country");
  size_t level_col = header.Require("eqf_level");

  std::vector<TaxonomyNode> nodes;
  nodes.reserve(rows.size() - 1);
  for (size_t r = 1; r < rows.size(); ++r) {
    const csv::Row &row = rows[r];
    std::string where =
        std::string(source) + ": row " + std::to_string(r);
    TaxonomyNode node;
    node.kind = EntityKind::kQualification;
    node.preferred_label = std::string(Cell(row, qual_col));
    if (IsBlank(node.preferred_label)) {
      throw IngestError(where + ": missing qualification string");
    }
    // Levels are written either as "4" or as "EQF4".
    std::string_view level_text = Trim(Cell(row, level_col));
    if (level_text.size() > 3 &&
        AsciiLower(level_text.substr(0, 3)) == "eqf") {
      level_text.remove_prefix(3);
    }
    int level = 0;
    bool ok = !level_text.empty() && level_text.size() <= 2;
    for (char c : level_text) {
      if (c < '0' || c > '9') ok = false;
    }
    if (ok) level = std::stoi(std::string(level_text));
    if (!ok || level < 1 || level > 8) {
      throw IngestError(where + ": EQF level '" +
                        std::string(Cell(row, level_col)) +
                        "' outside 1..8");
    }
    node.eqf_level = level;
    node.country = std::string(Trim(Cell(row, country_col)));
    char id[16];
    std::snprintf(id, sizeof(id), "q%04zu", r);
    node.id = id;
    nodes.push_back(std::move(node));
  }
  return ReferenceSet(EntityKind::kQualification, std::move(nodes));
}

ReferenceSet LoadReferenceSet(EntityKind kind,
                              const std::filesystem::path &path) {
  std::string text = ReadFile(path);
  return ParseEsco(kind, text, path.string());
}

ReferenceSet LoadOccupations(const std::filesystem::path &path) {
  return LoadReferenceSet(EntityKind::kOccupation, path);
}

ReferenceSet LoadSkills(const std::filesystem::path &path) {
  return LoadReferenceSet(EntityKind::kSkill, path);
}

ReferenceSet LoadEqf(const std::filesystem::path &path) {
  return LoadReferenceSet(EntityKind::kQualification, path);
}

std::string ToCanonicalCsv(const ReferenceSet &set) {
  std::string out;
  if (set.kind() == EntityKind::kQualification) {
    out += csv::FormatRow({"qualification", "country", "eqf_level"});
    for (const TaxonomyNode &node : set.nodes()) {
      out += csv::FormatRow({node.preferred_label, node.country.value_or(""),
                             std::to_string(node.eqf_level.value_or(0))});
    }
    return out;
  }
  out += csv::FormatRow({"id", "preferredLabel", "altLabels", "description"});
  for (const TaxonomyNode &node : set.nodes()) {
    std::string alts;
    for (size_t i = 0; i < node.alt_labels.size(); ++i) {
      if (i > 0) alts.push_back('\n');
      alts += node.alt_labels[i];
    }
    out += csv::FormatRow(
        {node.id, node.preferred_label, alts, node.description});
  }
  return out;
}

}  // namespace taxolink
