// Copyright 2026 The glyphforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <variant>
#include <vector>

#include "glyph/codebook.hpp"
#include "glyph/document.hpp"

namespace glyph {

// Structured form of the prompt grammar:
//   Text "<text>" in [font-color-<c>], [font-type-<f>].
struct PromptSpec {
  struct Entry {
    std::string text;
    int color_id = 0;
    int font_id = 0;
  };
  std::vector<Entry> entries;
};

inline std::string escape_prompt_text(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

// Canonical emitter: comma-separated token form, entries joined by single
// spaces, empty string for an empty document.
inline std::string serialize_prompt(const GlyphDocument& doc) {
  std::string out;
  for (size_t i = 0; i < doc.boxes.size(); ++i) {
    const auto& b = doc.boxes[i];
    if (i) out.push_back(' ');
    out += "Text \"" + escape_prompt_text(b.text) + "\" in [font-color-" +
           std::to_string(b.color_id) + "], [font-type-" + std::to_string(b.font_id) + "].";
  }
  return out;
}

namespace detail {

class PromptParser {
 public:
  explicit PromptParser(const std::string& s) : s_(s) {}

  PromptSpec parse() {
    PromptSpec spec;
    skip_spaces();
    while (pos_ < s_.size()) {
      spec.entries.push_back(parse_entry());
      skip_spaces();
    }
    return spec;
  }

 private:
  [[noreturn]] void fail(const std::string& what) {
    throw Error(ErrorCode::kParseError, what + " at byte offset " + std::to_string(pos_));
  }

  void skip_spaces() {
    while (pos_ < s_.size() && s_[pos_] == ' ') ++pos_;
  }

  void expect(const std::string& literal) {
    if (s_.compare(pos_, literal.size(), literal) != 0) fail("expected \"" + literal + "\"");
    pos_ += literal.size();
  }

  int parse_int() {
    size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] >= '0' && s_[pos_] <= '9') ++pos_;
    if (pos_ == start) fail("expected integer");
    return std::stoi(s_.substr(start, pos_ - start));
  }

  std::string parse_quoted() {
    expect("\"");
    std::string out;
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (c == '\\') {
        if (pos_ + 1 >= s_.size()) fail("dangling escape");
        out.push_back(s_[pos_ + 1]);
        pos_ += 2;
      } else if (c == '"') {
        ++pos_;
        return out;
      } else {
        out.push_back(c);
        ++pos_;
      }
    }
    fail("unterminated quoted text");
  }

  PromptSpec::Entry parse_entry() {
    PromptSpec::Entry e;
    expect("Text ");
    e.text = parse_quoted();
    expect(" in [font-color-");
    e.color_id = parse_int();
    expect("]");
    // The comma between the two tokens is optional on input.
    if (pos_ < s_.size() && s_[pos_] == ',') ++pos_;
    skip_spaces();
    expect("[font-type-");
    e.font_id = parse_int();
    expect("].");
    return e;
  }

  const std::string& s_;
  size_t pos_ = 0;
};

}  // namespace detail

// Exact inverse of serialize_prompt; also accepts the comma-free token form.
inline PromptSpec parse_prompt(const std::string& s) { return detail::PromptParser(s).parse(); }

// One element of a resolved token sequence: either a raw text byte or a
// reference to a codebook embedding.
struct ResolvedToken {
  enum class Kind { kByte, kColorEmbedding, kFontEmbedding };
  Kind kind;
  unsigned char byte = 0;  // for kByte
  int id = 0;              // codebook index for embedding tokens
};

// Replaces special tokens with codebook embedding slots; text runs stay as
// byte-level tokens. Output length = text bytes + 2 per entry.
inline std::vector<ResolvedToken> resolve_codebook_tokens(const PromptSpec& spec,
                                                          const FontCodebook& codebook) {
  std::vector<ResolvedToken> out;
  for (const auto& e : spec.entries) {
    if (e.color_id < 0 || e.color_id >= codebook.num_colors())
      throw Error(ErrorCode::kUnknownCodebookId, "color id " + std::to_string(e.color_id));
    if (e.font_id < 0 || e.font_id >= codebook.num_fonts())
      throw Error(ErrorCode::kUnknownCodebookId, "font id " + std::to_string(e.font_id));
    for (unsigned char b : e.text) out.push_back({ResolvedToken::Kind::kByte, b, 0});
    out.push_back({ResolvedToken::Kind::kColorEmbedding, 0, e.color_id});
    out.push_back({ResolvedToken::Kind::kFontEmbedding, 0, e.font_id});
  }
  return out;
}

}  // namespace glyph
