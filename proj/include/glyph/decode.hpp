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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "glyph/raster.hpp"

namespace glyph {

namespace detail {

// Exact template matcher for one face: maps a cell's binary pattern back to
// its character. Built once per face per decode call.
class GlyphMatcher {
 public:
  explicit GlyphMatcher(const FontAtlas& atlas) : atlas_(&atlas) {
    for (char c = kFirstPrintable + 1; c <= kLastPrintable; ++c)
      index_[key(atlas.bitmap(c))] = c;
  }

  // Extracts the cell at (x0,y0) scaled by s. Every sxs block must be
  // uniformly box-color or uniformly background; otherwise no match.
  std::optional<char> match_cell(const RasterImage& img, int x0, int y0, int s, Rgb color,
                                 Rgb background) const {
    const int cw = atlas_->cell_width(), ch = atlas_->cell_height();
    std::string k(static_cast<size_t>(cw) * ch, '0');
    bool any_lit = false;
    for (int gy = 0; gy < ch; ++gy)
      for (int gx = 0; gx < cw; ++gx) {
        const Rgb first = img.at(x0 + gx * s, y0 + gy * s);
        if (first != color && first != background) return std::nullopt;
        for (int sy = 0; sy < s; ++sy)
          for (int sx = 0; sx < s; ++sx)
            if (img.at(x0 + gx * s + sx, y0 + gy * s + sy) != first) return std::nullopt;
        if (first == color) {
          k[static_cast<size_t>(gy) * cw + gx] = '1';
          any_lit = true;
        }
      }
    if (!any_lit) return ' ';
    auto it = index_.find(k);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

 private:
  static std::string key(const GlyphBitmap& g) {
    std::string k(g.bits.size(), '0');
    for (size_t i = 0; i < g.bits.size(); ++i)
      if (g.bits[i]) k[i] = '1';
    return k;
  }

  const FontAtlas* atlas_;
  std::map<std::string, char> index_;
};

inline bool region_is_background(const RasterImage& img, const Rect& r, Rgb background) {
  for (int y = r.y; y < r.bottom(); ++y)
    for (int x = r.x; x < r.right(); ++x)
      if (img.at(x, y) != background) return false;
  return true;
}

inline bool region_equals(const RasterImage& a, const RasterImage& b, const Rect& r) {
  for (int y = r.y; y < r.bottom(); ++y)
    for (int x = r.x; x < r.right(); ++x)
      if (a.at(x, y) != b.at(x, y)) return false;
  return true;
}

}  // namespace detail

// Infers the canvas background from the first pixel outside every declared
// box; falls back to black when the boxes tile the canvas.
inline Rgb infer_background(const RasterImage& img, const std::vector<TextBox>& boxes) {
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      bool inside = false;
      for (const auto& b : boxes)
        if (b.bbox.contains(x, y)) { inside = true; break; }
      if (!inside) return img.at(x, y);
    }
  return Rgb{0, 0, 0};
}

// Perfect-OCR oracle: recovers each box's words from a rasterized image by
// exact template matching, then confirms the parse by re-rendering. Scale
// and per-line origins are recovered by descending search.
inline std::vector<std::vector<std::string>> decode_glyph_image(const RasterImage& img,
                                                                const std::vector<TextBox>& boxes,
                                                                const FontCodebook& codebook) {
  const Rgb background = infer_background(img, boxes);
  std::vector<std::vector<std::string>> result;
  std::map<int, detail::GlyphMatcher> matchers;

  for (const auto& box : boxes) {
    if (detail::region_is_background(img, box.bbox, background)) {
      result.emplace_back();
      continue;
    }
    const FontAtlas& atlas = codebook.font(box.font_id);
    const Rgb color = codebook.color(box.color_id);
    auto mit = matchers.find(box.font_id);
    if (mit == matchers.end())
      mit = matchers.emplace(box.font_id, detail::GlyphMatcher(atlas)).first;
    const detail::GlyphMatcher& matcher = mit->second;

    const int cw = atlas.cell_width(), ch = atlas.cell_height();
    const int smax = std::min(box.bbox.w / cw, box.bbox.h / ch);
    bool decoded = false;
    for (int s = smax; s >= 1 && !decoded; --s) {
      const int advance = ch * s + line_spacing_px(ch, s);
      const int max_cells = box.bbox.w / (cw * s);
      std::vector<std::string> fragments;
      bool ok = true;
      for (int y = box.bbox.y; y + ch * s <= box.bbox.bottom(); y += advance) {
        std::optional<std::string> frag;
        if (detail::region_is_background(img, {box.bbox.x, y, box.bbox.w, ch * s}, background)) {
          frag = std::string();  // blank band
        } else if (box.align == Align::kLeft) {
          std::string line;
          int x = box.bbox.x;
          bool all_match = true;
          for (int c = 0; c < max_cells; ++c, x += cw * s) {
            auto m = matcher.match_cell(img, x, y, s, color, background);
            if (!m) { all_match = false; break; }
            line.push_back(*m);
          }
          if (all_match) {
            while (!line.empty() && line.back() == ' ') line.pop_back();
            frag = line;
          }
        } else {
          for (int n = max_cells; n >= 1 && !frag; --n) {
            const int x0 = box.bbox.x + (box.bbox.w - n * cw * s) / 2;
            std::string line;
            bool all_match = true;
            for (int c = 0; c < n; ++c) {
              auto m = matcher.match_cell(img, x0 + c * cw * s, y, s, color, background);
              if (!m) { all_match = false; break; }
              line.push_back(*m);
            }
            if (all_match && !line.empty() && line.front() != ' ' && line.back() != ' ') frag = line;
          }
        }
        if (!frag) { ok = false; break; }
        if (frag->empty()) break;  // blank band: text ended on a previous line
        fragments.push_back(*frag);
      }
      if (!ok || fragments.empty()) continue;

      std::string text = fragments[0];
      for (size_t i = 1; i < fragments.size(); ++i) text += " " + fragments[i];

      // Closed-loop confirmation: the parse must re-render to the exact
      // observed pixels.
      TextBox candidate = box;
      candidate.text = text;
      RasterImage check(img.width, img.height, background);
      try {
        render_box(&check, candidate, codebook);
      } catch (const Error&) {
        continue;
      }
      if (detail::region_equals(check, img, box.bbox)) {
        result.push_back(split_words(text));
        decoded = true;
      }
    }
    if (!decoded)
      throw Error(ErrorCode::kDecodeMismatch, "no atlas glyph sequence reproduces the box pixels");
  }
  return result;
}

}  // namespace glyph
