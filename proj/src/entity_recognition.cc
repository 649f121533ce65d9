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

#include "taxolink/entity_recognition.h"

#include <array>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "strings.h"
#include "taxolink/errors.h"

namespace taxolink {

using nlohmann::json;

std::optional<BioLabel> BioLabel::Parse(std::string_view text) {
  text = Trim(text);
  if (text == "O") return O();
  if (text.size() < 3 || text[1] != '-') return std::nullopt;
  auto kind = ParseKind(text.substr(2));
  if (!kind) return std::nullopt;
  if (text[0] == 'B') return B(*kind);
  if (text[0] == 'I') return I(*kind);
  return std::nullopt;
}

std::string BioLabel::ToString() const {
  switch (tag_) {
    case Tag::kOutside:
      return "O";
    case Tag::kBegin:
      return "B-" + std::string(KindLabelName(kind_));
    case Tag::kInside:
      return "I-" + std::string(KindLabelName(kind_));
  }
  return "O";
}

namespace {

constexpr std::array<std::string_view, 8> kAbbreviations = {
    "e.g.", "i.e.", "etc.", "Mr.", "Ms.", "Dr.", "vs.", "No."};

bool IsSentenceEnd(char c) { return c == '.' || c == '!' || c == '?'; }

bool IsSplitPunct(char c) {
  static constexpr std::string_view kPunct = ".,;:!?()[]{}'\"/&";
  return kPunct.find(c) != std::string_view::npos;
}

bool EndsWithAbbreviation(std::string_view text, size_t end) {
  size_t start = end;
  while (start > 0 && !IsAsciiSpace(text[start - 1])) --start;
  std::string_view word = text.substr(start, end - start);
  for (std::string_view abbrev : kAbbreviations) {
    if (word == abbrev) return true;
  }
  return false;
}

void TokenizeSpan(std::string_view text, size_t begin, size_t end,
                  std::vector<Token> &out) {
  size_t i = begin;
  while (i < end) {
    if (IsAsciiSpace(text[i])) {
      ++i;
      continue;
    }
    if (IsSplitPunct(text[i])) {
      out.push_back({std::string(1, text[i]), i, i + 1, out.size()});
      ++i;
      continue;
    }
    size_t start = i;
    while (i < end && !IsAsciiSpace(text[i]) && !IsSplitPunct(text[i])) ++i;
    out.push_back(
        {std::string(text.substr(start, i - start)), start, i, out.size()});
  }
}

}  // namespace

std::vector<TokenizedSentence> Tokenize(const Document &doc) {
  std::string_view text = doc.text;
  std::vector<TokenizedSentence> sentences;
  size_t token_offset = 0;
  auto emit = [&](size_t begin, size_t end) {
    TokenizedSentence sentence;
    TokenizeSpan(text, begin, end, sentence.tokens);
    if (sentence.tokens.empty()) return;
    sentence.sentence_index = sentences.size();
    sentence.token_offset = token_offset;
    token_offset += sentence.tokens.size();
    sentences.push_back(std::move(sentence));
  };

  size_t start = 0;
  for (size_t i = 0; i < text.size(); ++i) {
    if (!IsSentenceEnd(text[i])) continue;
    bool boundary = i + 1 == text.size() || IsAsciiSpace(text[i + 1]);
    if (!boundary || EndsWithAbbreviation(text, i + 1)) continue;
    emit(start, i + 1);
    start = i + 1;
  }
  emit(start, text.size());
  return sentences;
}

const SpecialTokenSet &DefaultSpecialTokens() {
  static const SpecialTokenSet kSpecials = {"[SEP]", "[CLS]", "[PAD]", "[UNK]",
                                            "<s>",   "</s>",  "<pad>"};
  return kSpecials;
}

LabeledTokens StripSpecialTokens(LabeledTokens input,
                                 const SpecialTokenSet &specials) {
  if (input.tokens.size() != input.labels.size()) {
    throw std::invalid_argument(
        "strip_special_tokens: " + std::to_string(input.tokens.size()) +
        " tokens but " + std::to_string(input.labels.size()) + " labels");
  }
  LabeledTokens out;
  for (size_t i = 0; i < input.tokens.size(); ++i) {
    if (specials.contains(input.tokens[i].text)) continue;
    out.tokens.push_back(std::move(input.tokens[i]));
    out.labels.push_back(input.labels[i]);
  }
  return out;
}

bool IsValidBio(const std::vector<BioLabel> &labels) {
  for (size_t i = 0; i < labels.size(); ++i) {
    if (!labels[i].is_inside()) continue;
    if (i == 0 || labels[i - 1].is_outside() ||
        labels[i - 1].kind() != labels[i].kind()) {
      return false;
    }
  }
  return true;
}

std::vector<BioLabel> RepairBio(const std::vector<BioLabel> &labels) {
  std::vector<BioLabel> out = labels;
  const size_t n = labels.size();

  // (a) Close single-O gaps inside an entity. Both neighbours of a
  // candidate O are non-O, so this pass never sees its own edits.
  for (size_t i = 1; i + 1 < n; ++i) {
    const BioLabel &prev = labels[i - 1];
    const BioLabel &next = labels[i + 1];
    if (labels[i].is_outside() && !prev.is_outside() && next.is_inside() &&
        prev.kind() == next.kind()) {
      out[i] = BioLabel::I(next.kind());
    }
  }

  // (b) Drop a dangling sentence-final I.
  if (n > 0 && out[n - 1].is_inside()) {
    bool continues = n >= 2 && !out[n - 2].is_outside() &&
                     out[n - 2].kind() == out[n - 1].kind();
    if (!continues) out[n - 1] = BioLabel::O();
  }

  // (c) Promote orphan I tags to B.
  for (size_t i = 0; i < n; ++i) {
    if (!out[i].is_inside()) continue;
    if (i == 0 || out[i - 1].is_outside() ||
        out[i - 1].kind() != out[i].kind()) {
      out[i] = BioLabel::B(out[i].kind());
    }
  }
  return out;
}

std::vector<Mention> ExtractMentions(std::string_view doc_text,
                                     const TokenizedSentence &sentence,
                                     const std::vector<BioLabel> &labels) {
  const auto &tokens = sentence.tokens;
  if (tokens.size() != labels.size()) {
    throw std::invalid_argument("extract_mentions: " +
                                std::to_string(tokens.size()) +
                                " tokens but " + std::to_string(labels.size()) +
                                " labels");
  }
  if (!IsValidBio(labels)) {
    throw std::invalid_argument(
        "extract_mentions: invalid BIO sequence (I without a head); "
        "run RepairBio first");
  }
  std::vector<Mention> mentions;
  size_t i = 0;
  while (i < labels.size()) {
    if (!labels[i].is_begin()) {
      ++i;
      continue;
    }
    size_t j = i + 1;
    while (j < labels.size() && labels[j].is_inside()) ++j;
    Mention m;
    m.kind = labels[i].kind();
    m.sentence_index = sentence.sentence_index;
    m.token_start = tokens[i].position;
    m.token_end = tokens[j - 1].position + 1;
    m.doc_token_start = sentence.token_offset + m.token_start;
    m.doc_token_end = sentence.token_offset + m.token_end;
    m.char_start = tokens[i].char_start;
    m.char_end = tokens[j - 1].char_end;
    for (size_t t = i; t < j; ++t) {
      if (t > i) m.token_text.push_back(' ');
      m.token_text += tokens[t].text;
    }
    if (m.char_end <= doc_text.size() && m.char_start < m.char_end) {
      m.surface = std::string(
          doc_text.substr(m.char_start, m.char_end - m.char_start));
    } else {
      m.surface = m.token_text;
    }
    mentions.push_back(std::move(m));
    i = j;
  }
  return mentions;
}

std::vector<BioLabel> MentionsToLabels(const std::vector<Mention> &mentions,
                                       size_t num_tokens) {
  std::vector<BioLabel> labels(num_tokens, BioLabel::O());
  for (const Mention &m : mentions) {
    if (m.token_end > num_tokens || m.token_start >= m.token_end) {
      throw std::invalid_argument("mention span out of range");
    }
    labels[m.token_start] = BioLabel::B(m.kind);
    for (size_t t = m.token_start + 1; t < m.token_end; ++t) {
      labels[t] = BioLabel::I(m.kind);
    }
  }
  return labels;
}

namespace {

std::vector<BioLabel> ParseLabelList(const json &list, const char *who) {
  std::vector<BioLabel> labels;
  for (const json &item : list) {
    std::string text = item.get<std::string>();
    auto label = BioLabel::Parse(text);
    if (!label) {
      throw ProviderError(std::string(who) + ": unknown label '" + text + "'");
    }
    labels.push_back(*label);
  }
  return labels;
}

}  // namespace

GoldReplayLabeler::GoldReplayLabeler(
    std::unordered_map<std::string, Annotation> annotations)
    : annotations_(std::move(annotations)) {
  for (const auto &[id, a] : annotations_) {
    if (a.tokens.size() != a.labels.size()) {
      throw FormatError("annotation " + id + ": " +
                        std::to_string(a.tokens.size()) + " token lists but " +
                        std::to_string(a.labels.size()) + " label lists");
    }
    for (size_t s = 0; s < a.tokens.size(); ++s) {
      if (a.tokens[s].size() != a.labels[s].size()) {
        throw FormatError("annotation " + id + ": sentence " +
                          std::to_string(s) + " has " +
                          std::to_string(a.tokens[s].size()) + " tokens but " +
                          std::to_string(a.labels[s].size()) + " labels");
      }
    }
  }
}

GoldReplayLabeler GoldReplayLabeler::FromFile(
    const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw ProviderError("cannot read annotation file " + path.string());
  std::unordered_map<std::string, Annotation> annotations;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (IsBlank(line)) continue;
    std::string where = path.string() + ":" + std::to_string(line_no);
    try {
      json doc = json::parse(line);
      Annotation a;
      a.tokens = doc.at("tokens").get<std::vector<std::vector<std::string>>>();
      for (const json &sentence : doc.at("labels")) {
        a.labels.push_back(ParseLabelList(sentence, where.c_str()));
      }
      if (doc.contains("entities")) {
        for (const json &e : doc["entities"]) {
          GoldEntity entity;
          auto kind = ParseKind(e.at("kind").get<std::string>());
          if (!kind) throw FormatError(where + ": unknown entity kind");
          entity.kind = *kind;
          entity.sentence = e.at("sentence").get<size_t>();
          entity.start = e.at("start").get<size_t>();
          entity.end = e.at("end").get<size_t>();
          if (e.contains("gold_id") && e["gold_id"].is_string()) {
            entity.gold_id = e["gold_id"].get<std::string>();
          }
          a.entities.push_back(std::move(entity));
        }
      }
      std::string id = doc.at("id").is_string()
                           ? doc["id"].get<std::string>()
                           : doc["id"].dump();
      if (!annotations.emplace(id, std::move(a)).second) {
        throw FormatError(where + ": duplicate document id " + id);
      }
    } catch (const json::exception &e) {
      throw FormatError(where + ": " + e.what());
    } catch (const ProviderError &e) {
      throw FormatError(e.what());
    }
  }
  return GoldReplayLabeler(std::move(annotations));
}

const GoldReplayLabeler::Annotation &GoldReplayLabeler::Find(
    const std::string &doc_id) const {
  auto it = annotations_.find(doc_id);
  if (it == annotations_.end()) {
    throw ProviderError("gold labeler has no annotation for document " +
                        doc_id);
  }
  return it->second;
}

std::vector<TokenizedSentence> GoldReplayLabeler::TokenizeDocument(
    const Document &doc) {
  const Annotation &a = Find(doc.id);
  std::vector<TokenizedSentence> sentences;
  size_t cursor = 0;
  size_t token_offset = 0;
  for (size_t s = 0; s < a.tokens.size(); ++s) {
    TokenizedSentence sentence;
    sentence.sentence_index = s;
    sentence.token_offset = token_offset;
    for (const std::string &text : a.tokens[s]) {
      size_t pos = doc.text.find(text, cursor);
      if (pos == std::string::npos) {
        if (!DefaultSpecialTokens().contains(text)) {
          throw ProviderError("document " + doc.id + ": annotated token '" +
                              text + "' not found in the text");
        }
        // Special tokens have no surface; give them an empty span.
        pos = cursor;
        sentence.tokens.push_back(
            {text, pos, pos, sentence.tokens.size()});
        continue;
      }
      sentence.tokens.push_back(
          {text, pos, pos + text.size(), sentence.tokens.size()});
      cursor = pos + text.size();
    }
    token_offset += sentence.tokens.size();
    sentences.push_back(std::move(sentence));
  }
  return sentences;
}

std::vector<std::vector<BioLabel>> GoldReplayLabeler::Label(
    const Document &doc, const std::vector<TokenizedSentence> &sentences) {
  const Annotation &a = Find(doc.id);
  if (sentences.size() != a.labels.size()) {
    throw ProviderError("document " + doc.id + ": annotation has " +
                        std::to_string(a.labels.size()) + " sentences, got " +
                        std::to_string(sentences.size()));
  }
  return a.labels;
}

ServiceLabeler::ServiceLabeler(std::unique_ptr<LineChannel> channel)
    : channel_(std::move(channel)) {}

std::vector<std::vector<BioLabel>> ServiceLabeler::Label(
    const Document &doc, const std::vector<TokenizedSentence> &sentences) {
  json tokens = json::array();
  for (const TokenizedSentence &s : sentences) {
    json words = json::array();
    for (const Token &t : s.tokens) words.push_back(t.text);
    tokens.push_back(std::move(words));
  }
  json request = {{"op", "label"}, {"tokens", std::move(tokens)}};
  std::string reply = channel_->RoundTrip(request.dump());
  json response;
  try {
    response = json::parse(reply);
  } catch (const json::exception &e) {
    throw ProviderError(std::string("labeling service sent invalid JSON: ") +
                        e.what());
  }
  if (response.contains("error")) {
    throw ProviderError("labeling service error: " + response["error"].dump());
  }
  std::vector<std::vector<BioLabel>> labels;
  try {
    for (const json &sentence : response.at("labels")) {
      labels.push_back(ParseLabelList(sentence, "labeling service"));
    }
  } catch (const json::exception &e) {
    throw ProviderError(std::string("malformed labeling response for ") +
                        doc.id + ": " + e.what());
  }
  return labels;
}

std::unique_ptr<SequenceLabeler> MakeLabeler(std::string_view spec) {
  if (spec.starts_with("gold:")) {
    try {
      return std::make_unique<GoldReplayLabeler>(
          GoldReplayLabeler::FromFile(std::string(spec.substr(5))));
    } catch (const FormatError &e) {
      throw ProviderError(e.what());
    }
  }
  return std::make_unique<ServiceLabeler>(OpenLineChannel(spec));
}

std::vector<Mention> Recognize(const Document &doc, SequenceLabeler &labeler) {
  std::vector<TokenizedSentence> sentences = labeler.TokenizeDocument(doc);
  if (sentences.empty()) return {};
  std::vector<std::vector<BioLabel>> labels = labeler.Label(doc, sentences);
  if (labels.size() != sentences.size()) {
    throw ProviderError("labeler returned " + std::to_string(labels.size()) +
                        " label lists for " +
                        std::to_string(sentences.size()) + " sentences");
  }
  std::vector<Mention> mentions;
  for (size_t s = 0; s < sentences.size(); ++s) {
    if (labels[s].size() != sentences[s].tokens.size()) {
      throw ProviderError(
          "labeler returned " + std::to_string(labels[s].size()) +
          " labels for a sentence of " +
          std::to_string(sentences[s].tokens.size()) + " tokens");
    }
    LabeledTokens stripped =
        StripSpecialTokens({sentences[s].tokens, labels[s]});
    TokenizedSentence kept = sentences[s];
    kept.tokens = std::move(stripped.tokens);
    std::vector<Mention> found =
        ExtractMentions(doc.text, kept, RepairBio(stripped.labels));
    mentions.insert(mentions.end(), std::make_move_iterator(found.begin()),
                    std::make_move_iterator(found.end()));
  }
  return mentions;
}

}  // namespace taxolink
