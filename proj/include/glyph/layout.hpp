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

#include "glyph/atlas.hpp"
#include "glyph/document.hpp"

namespace glyph {

// Multi-line arrangement of a text run inside its box: the chosen integer
// glyph scale and the pixel origin of every line fragment.
struct LayoutPlan {
  int scale = 1;
  int line_spacing = 0;  // pixels between line bottoms and next tops
  struct Line {
    std::string fragment;
    int x = 0;  // top-left pixel of the first cell
    int y = 0;
  };
  std::vector<Line> lines;
};

// Inter-line gap: 25% of the scaled cell height, rounded up.
inline int line_spacing_px(int cell_h, int scale) { return (cell_h * scale + 3) / 4; }

namespace detail {

// Greedy first-fit wrap at a fixed scale. Returns false if a single word
// exceeds the box width or the wrapped lines exceed the box height.
inline bool wrap_at_scale(const std::vector<std::string>& words, const Rect& box, int cell_w,
                          int cell_h, int scale, std::vector<std::string>* out_lines) {
  const int gw = cell_w * scale, gh = cell_h * scale;
  const int max_cells = box.w / gw;
  if (max_cells < 1) return false;
  std::vector<std::string> lines;
  std::string cur;
  int cur_cells = 0;
  for (const auto& w : words) {
    const int need = static_cast<int>(w.size());
    if (need > max_cells) return false;
    if (cur.empty()) {
      cur = w;
      cur_cells = need;
    } else if (cur_cells + 1 + need <= max_cells) {
      cur += ' ';
      cur += w;
      cur_cells += 1 + need;
    } else {
      lines.push_back(cur);
      cur = w;
      cur_cells = need;
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  const int n = static_cast<int>(lines.size());
  const int total_h = n * gh + (n - 1) * line_spacing_px(cell_h, scale);
  if (total_h > box.h) return false;
  if (out_lines) *out_lines = std::move(lines);
  return true;
}

}  // namespace detail

// Largest-scale greedy layout: searches scale downward from the geometric
// upper bound and takes the first scale at which first-fit word wrap fits.
inline LayoutPlan layout_box(const std::string& text, const TextBox& box, const FontAtlas& atlas) {
  const auto words = split_words(text);
  if (words.empty()) throw Error(ErrorCode::kUnfittable, "text has no non-space characters");
  const int cw = atlas.cell_width(), ch = atlas.cell_height();
  const int smax = std::min(box.bbox.w / cw, box.bbox.h / ch);
  for (int s = smax; s >= 1; --s) {
    std::vector<std::string> lines;
    if (!detail::wrap_at_scale(words, box.bbox, cw, ch, s, &lines)) continue;
    LayoutPlan plan;
    plan.scale = s;
    plan.line_spacing = line_spacing_px(ch, s);
    const int advance = ch * s + plan.line_spacing;
    for (size_t i = 0; i < lines.size(); ++i) {
      LayoutPlan::Line ln;
      ln.fragment = lines[i];
      const int line_w = static_cast<int>(lines[i].size()) * cw * s;
      ln.x = box.align == Align::kCenter ? box.bbox.x + (box.bbox.w - line_w) / 2 : box.bbox.x;
      ln.y = box.bbox.y + static_cast<int>(i) * advance;
      plan.lines.push_back(std::move(ln));
    }
    return plan;
  }
  throw Error(ErrorCode::kUnfittable, "text does not fit box at any scale: \"" + text + "\"");
}

inline bool fits_box(const std::string& text, const TextBox& box, const FontAtlas& atlas) {
  const auto words = split_words(text);
  if (words.empty()) return false;
  return detail::wrap_at_scale(words, box.bbox, atlas.cell_width(), atlas.cell_height(), 1, nullptr);
}

}  // namespace glyph
