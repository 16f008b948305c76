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
#include <vector>

#include "glyph/common.hpp"

namespace glyph {

enum class Align { kLeft, kCenter };

// One styled text run inside an axis-aligned rectangle; the instance unit
// of the box-level contrastive loss.
struct TextBox {
  Rect bbox;
  std::string text;
  int font_id = 0;
  int color_id = 0;
  Align align = Align::kLeft;
};

// One synthetic design image: canvas, background, ordered text boxes.
struct GlyphDocument {
  int width = 0;
  int height = 0;
  Rgb background{0, 0, 0};  // black by default
  std::vector<TextBox> boxes;
};

inline std::vector<std::string> split_words(const std::string& text) {
  std::vector<std::string> words;
  std::string cur;
  for (char c : text) {
    if (c == ' ') {
      if (!cur.empty()) words.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) words.push_back(cur);
  return words;
}

inline std::string join_words(const std::vector<std::string>& words) {
  std::string out;
  for (size_t i = 0; i < words.size(); ++i) {
    if (i) out.push_back(' ');
    out += words[i];
  }
  return out;
}

inline std::vector<std::string> document_words(const GlyphDocument& doc) {
  std::vector<std::string> all;
  for (const auto& box : doc.boxes) {
    auto w = split_words(box.text);
    all.insert(all.end(), w.begin(), w.end());
  }
  return all;
}

}  // namespace glyph
