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

#ifndef TAXOLINK_ENTITY_RECOGNITION_H_
#define TAXOLINK_ENTITY_RECOGNITION_H_

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "taxolink/line_channel.h"
#include "taxolink/taxonomy.h"

namespace taxolink {

struct Document {
  std::string id;
  std::string text;
};

struct Token {
  std::string text;
  size_t char_start = 0;  // byte offsets into the document text
  size_t char_end = 0;
  size_t position = 0;  // index within its sentence as tokenized

  bool operator==(const Token &other) const = default;
};

struct TokenizedSentence {
  size_t sentence_index = 0;
  // Document-level index of the sentence's first token; sentences are
  // numbered contiguously so token_offset + position is a document index.
  size_t token_offset = 0;
  std::vector<Token> tokens;
};

class BioLabel {
 public:
  enum class Tag : unsigned char { kOutside, kBegin, kInside };

  constexpr BioLabel() = default;
  static constexpr BioLabel O() { return BioLabel(); }
  static constexpr BioLabel B(EntityKind kind) {
    return BioLabel(Tag::kBegin, kind);
  }
  static constexpr BioLabel I(EntityKind kind) {
    return BioLabel(Tag::kInside, kind);
  }

  // "O", "B-Skill", "I-Occupation", ... Kind names are case-insensitive.
  static std::optional<BioLabel> Parse(std::string_view text);
  std::string ToString() const;

  Tag tag() const { return tag_; }
  // Meaningless for O.
  EntityKind kind() const { return kind_; }
  bool is_outside() const { return tag_ == Tag::kOutside; }
  bool is_begin() const { return tag_ == Tag::kBegin; }
  bool is_inside() const { return tag_ == Tag::kInside; }

  bool operator==(const BioLabel &other) const {
    return tag_ == other.tag_ && (is_outside() || kind_ == other.kind_);
  }

 private:
  constexpr BioLabel(Tag tag, EntityKind kind) : tag_(tag), kind_(kind) {}

  Tag tag_ = Tag::kOutside;
  EntityKind kind_ = EntityKind::kOccupation;
};

struct Mention {
  EntityKind kind = EntityKind::kOccupation;
  size_t sentence_index = 0;
  size_t token_start = 0;  // [token_start, token_end) within the sentence
  size_t token_end = 0;
  size_t doc_token_start = 0;  // the same span in document token indices
  size_t doc_token_end = 0;
  size_t char_start = 0;
  size_t char_end = 0;
  std::string surface;     // document slice [char_start, char_end)
  std::string token_text;  // covered token surfaces joined by single spaces

  bool operator==(const Mention &other) const = default;
};

// Rule-based sentence and token splitting.
//
// Sentences end at '.', '!' or '?' followed by whitespace or end of text,
// unless the whitespace-delimited word ending there is one of "e.g.",
// "i.e.", "etc.", "Mr.", "Ms.", "Dr.", "vs.", "No.". Tokens are
// whitespace-separated words with the characters .,;:!?()[]{}'"/& split
// off as single-character tokens. Offsets always slice the document back
// to the token text.
std::vector<TokenizedSentence> Tokenize(const Document &doc);

using SpecialTokenSet = std::set<std::string, std::less<>>;

// [SEP] [CLS] [PAD] [UNK] <s> </s> <pad>
const SpecialTokenSet &DefaultSpecialTokens();

struct LabeledTokens {
  std::vector<Token> tokens;
  std::vector<BioLabel> labels;
};

// Removes positions whose token text is a special token from both lists.
// Throws std::invalid_argument on a length mismatch.
LabeledTokens StripSpecialTokens(
    LabeledTokens input, const SpecialTokenSet &specials = DefaultSpecialTokens());

// True when every I is preceded by a B or I of the same kind.
bool IsValidBio(const std::vector<BioLabel> &labels);

// Repairs a predicted label sequence into valid BIO:
//  (a) an O sitting between a B/I of kind K and an I of kind K becomes I-K;
//  (b) a sentence-final I with no B/I of its kind right before it becomes O;
//  (c) any remaining I that does not continue an entity of its kind
//      becomes B of its kind.
std::vector<BioLabel> RepairBio(const std::vector<BioLabel> &labels);

// Turns each maximal B-K I-K* run into a Mention. `doc_text` supplies the
// surface slice. Throws std::invalid_argument when `labels` is not valid
// BIO or its length differs from the sentence.
std::vector<Mention> ExtractMentions(std::string_view doc_text,
                                     const TokenizedSentence &sentence,
                                     const std::vector<BioLabel> &labels);

// Inverse of ExtractMentions for a single sentence: the BIO labels that
// produce `mentions` over `num_tokens` tokens.
std::vector<BioLabel> MentionsToLabels(const std::vector<Mention> &mentions,
                                       size_t num_tokens);

// The token-classification contract. Labelers may bring their own
// tokenization (gold replay does); by default documents go through
// Tokenize.
class SequenceLabeler {
 public:
  virtual ~SequenceLabeler() = default;

  virtual std::vector<TokenizedSentence> TokenizeDocument(
      const Document &doc) {
    return Tokenize(doc);
  }

  // One label list per sentence, each as long as the sentence.
  virtual std::vector<std::vector<BioLabel>> Label(
      const Document &doc, const std::vector<TokenizedSentence> &sentences) = 0;
};

// An annotated entity in a gold-replay file.
struct GoldEntity {
  EntityKind kind = EntityKind::kOccupation;
  size_t sentence = 0;
  size_t start = 0;  // [start, end) token positions within the sentence
  size_t end = 0;
  std::string gold_id;
};

// Replays labels from an annotation file (JSON Lines, one document per
// line):
//
//   {"id": ..., "tokens": [[...], ...], "labels": [[...], ...],
//    "entities": [{"kind": ..., "sentence": i, "start": s, "end": e,
//                  "gold_id": ...}, ...]}
//
// The file's own tokens are used, aligned left to right against the
// document text. Safe for concurrent use.
class GoldReplayLabeler : public SequenceLabeler {
 public:
  struct Annotation {
    std::vector<std::vector<std::string>> tokens;
    std::vector<std::vector<BioLabel>> labels;
    std::vector<GoldEntity> entities;
  };

  explicit GoldReplayLabeler(
      std::unordered_map<std::string, Annotation> annotations);
  static GoldReplayLabeler FromFile(const std::filesystem::path &path);

  std::vector<TokenizedSentence> TokenizeDocument(
      const Document &doc) override;
  std::vector<std::vector<BioLabel>> Label(
      const Document &doc,
      const std::vector<TokenizedSentence> &sentences) override;

  // Throws ProviderError when the document is not annotated.
  const Annotation &Find(const std::string &doc_id) const;
  size_t size() const { return annotations_.size(); }

 private:
  std::unordered_map<std::string, Annotation> annotations_;
};

// Client for the labeling service protocol:
//
//   -> {"op":"label","tokens":[["Java","skills"], ...]}
//   <- {"labels":[["B-Skill","I-Skill"], ...]}     or  {"error": "..."}
class ServiceLabeler : public SequenceLabeler {
 public:
  explicit ServiceLabeler(std::unique_ptr<LineChannel> channel);

  std::vector<std::vector<BioLabel>> Label(
      const Document &doc,
      const std::vector<TokenizedSentence> &sentences) override;

 private:
  std::unique_ptr<LineChannel> channel_;
};

// Builds a labeler from "gold:PATH" or a service address (see
// OpenLineChannel). Throws ProviderError.
std::unique_ptr<SequenceLabeler> MakeLabeler(std::string_view spec);

// tokenize -> label -> strip special tokens -> repair -> extract, in
// document order. Throws ProviderError when the labeler fails or returns
// label lists of the wrong length.
std::vector<Mention> Recognize(const Document &doc, SequenceLabeler &labeler);

}  // namespace taxolink

#endif  // TAXOLINK_ENTITY_RECOGNITION_H_
