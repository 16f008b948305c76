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

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <vector>

#include "glyph/common.hpp"

namespace glyph {

inline constexpr char kFirstPrintable = 0x20;
inline constexpr char kLastPrintable = 0x7e;
inline constexpr int kNumPrintable = kLastPrintable - kFirstPrintable + 1;  // 95

// Binary coverage bitmap for one character cell, row-major, 0/1 per pixel.
struct GlyphBitmap {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  std::uint8_t at(int x, int y) const { return bits[static_cast<size_t>(y) * width + x]; }
  void set(int x, int y, std::uint8_t v) { bits[static_cast<size_t>(y) * width + x] = v; }
  bool empty_glyph() const {
    for (auto b : bits)
      if (b) return false;
    return true;
  }
  bool operator==(const GlyphBitmap& o) const {
    return width == o.width && height == o.height && bits == o.bits;
  }
};

// Monospaced bitmap face covering printable ASCII. Faces are synthetic:
// glyph shapes are drawn from a seeded generator, with optional 1-px
// dilation ("bold") and per-row shear ("italic") derived variants.
class FontAtlas {
 public:
  FontAtlas() = default;

  FontAtlas(int face_id, int cell_w, int cell_h) : face_id_(face_id), cell_w_(cell_w), cell_h_(cell_h) {
    glyphs_.resize(kNumPrintable);
    for (auto& g : glyphs_) {
      g.width = cell_w;
      g.height = cell_h;
      g.bits.assign(static_cast<size_t>(cell_w) * cell_h, 0);
    }
  }

  // Builds a synthetic face. `family_seed` picks the glyph shapes,
  // `bold_dilate` and `italic_shear` derive styled variants of the family.
  static FontAtlas synthesize(int face_id, std::uint64_t family_seed, bool bold_dilate,
                              int italic_shear, int cell_w = 8, int cell_h = 16) {
    FontAtlas atlas(face_id, cell_w, cell_h);
    atlas.bold_dilate_ = bold_dilate;
    atlas.italic_shear_ = italic_shear;
    for (int ci = 1; ci < kNumPrintable; ++ci) {  // index 0 is space, left empty
      const char c = static_cast<char>(kFirstPrintable + ci);
      GlyphBitmap g = synth_glyph(family_seed, c, cell_w, cell_h);
      if (bold_dilate) g = dilate(g);
      if (italic_shear > 0) g = shear(g, italic_shear);
      atlas.glyphs_[ci] = g;
    }
    atlas.enforce_distinct();
    return atlas;
  }

  int face_id() const { return face_id_; }
  int cell_width() const { return cell_w_; }
  int cell_height() const { return cell_h_; }
  bool bold_dilate() const { return bold_dilate_; }
  int italic_shear() const { return italic_shear_; }

  bool has_char(char c) const { return c >= kFirstPrintable && c <= kLastPrintable; }

  const GlyphBitmap& bitmap(char c) const {
    if (!has_char(c)) throw Error(ErrorCode::kDecodeMismatch, "non-printable character");
    return glyphs_[c - kFirstPrintable];
  }

  GlyphBitmap& mutable_bitmap(char c) { return glyphs_[c - kFirstPrintable]; }

  // Atlas file: "GATLAS1 <cell_w> <cell_h>" header, then one line per
  // character: two-digit hex char code, space, hex-encoded rows
  // (ceil(w/8) bytes per row, rows concatenated).
  void save(std::ostream& os) const {
    os << "GATLAS1 " << cell_w_ << " " << cell_h_ << "\n";
    const int row_bytes = (cell_w_ + 7) / 8;
    for (int ci = 0; ci < kNumPrintable; ++ci) {
      const char c = static_cast<char>(kFirstPrintable + ci);
      os << hex_byte(static_cast<std::uint8_t>(c)) << " ";
      const GlyphBitmap& g = glyphs_[ci];
      for (int y = 0; y < cell_h_; ++y) {
        for (int b = 0; b < row_bytes; ++b) {
          std::uint8_t byte = 0;
          for (int i = 0; i < 8; ++i) {
            const int x = b * 8 + i;
            if (x < cell_w_ && g.at(x, y)) byte |= static_cast<std::uint8_t>(0x80 >> i);
          }
          os << hex_byte(byte);
        }
      }
      os << "\n";
    }
  }

  static FontAtlas load(std::istream& is, int face_id = 0) {
    std::string magic;
    int cw = 0, ch = 0;
    if (!(is >> magic >> cw >> ch) || magic != "GATLAS1" || cw < 1 || ch < 1)
      throw Error(ErrorCode::kParseError, "bad atlas header");
    FontAtlas atlas(face_id, cw, ch);
    const int row_bytes = (cw + 7) / 8;
    std::string code_hex, rows_hex;
    while (is >> code_hex >> rows_hex) {
      const int code = std::stoi(code_hex, nullptr, 16);
      if (code < kFirstPrintable || code > kLastPrintable)
        throw Error(ErrorCode::kParseError, "atlas char code out of range");
      if (static_cast<int>(rows_hex.size()) != 2 * row_bytes * ch)
        throw Error(ErrorCode::kParseError, "atlas row length mismatch");
      GlyphBitmap& g = atlas.glyphs_[code - kFirstPrintable];
      for (int y = 0; y < ch; ++y)
        for (int b = 0; b < row_bytes; ++b) {
          const int off = 2 * (y * row_bytes + b);
          const int byte = std::stoi(rows_hex.substr(off, 2), nullptr, 16);
          for (int i = 0; i < 8; ++i) {
            const int x = b * 8 + i;
            if (x < cw) g.set(x, y, (byte >> (7 - i)) & 1 ? 1 : 0);
          }
        }
    }
    return atlas;
  }

 private:
  static std::string hex_byte(std::uint8_t b) {
    static const char* digits = "0123456789abcdef";
    std::string s(2, '0');
    s[0] = digits[b >> 4];
    s[1] = digits[b & 0xf];
    return s;
  }

  // Seeded blobby glyph: random strokes on the cell grid. Shapes only need
  // to be mutually distinct and cell-contained; legibility is not a goal.
  static GlyphBitmap synth_glyph(std::uint64_t family_seed, char c, int w, int h) {
    GlyphBitmap g;
    g.width = w;
    g.height = h;
    g.bits.assign(static_cast<size_t>(w) * h, 0);
    Rng rng(family_seed * 131071ull + static_cast<std::uint64_t>(c));
    const int strokes = 3 + rng.uniform_int(0, 2);
    for (int s = 0; s < strokes; ++s) {
      int x0 = rng.uniform_int(0, w - 1), y0 = rng.uniform_int(1, h - 2);
      int x1 = rng.uniform_int(0, w - 1), y1 = rng.uniform_int(1, h - 2);
      draw_line(g, x0, y0, x1, y1);
    }
    // Sprinkle a few lone pixels so short strokes still separate glyphs.
    for (int i = 0; i < 4; ++i)
      g.set(rng.uniform_int(0, w - 1), rng.uniform_int(1, h - 2), 1);
    return g;
  }

  static void draw_line(GlyphBitmap& g, int x0, int y0, int x1, int y1) {
    const int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
    const int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    while (true) {
      g.set(x0, y0, 1);
      if (x0 == x1 && y0 == y1) break;
      const int e2 = 2 * err;
      if (e2 >= dy) { err += dy; x0 += sx; }
      if (e2 <= dx) { err += dx; y0 += sy; }
    }
  }

  static GlyphBitmap dilate(const GlyphBitmap& g) {
    GlyphBitmap out = g;
    for (int y = 0; y < g.height; ++y)
      for (int x = 0; x < g.width; ++x) {
        if (g.at(x, y)) continue;
        const bool lit = (x > 0 && g.at(x - 1, y)) || (x + 1 < g.width && g.at(x + 1, y)) ||
                         (y > 0 && g.at(x, y - 1)) || (y + 1 < g.height && g.at(x, y + 1));
        if (lit) out.set(x, y, 1);
      }
    return out;
  }

  static GlyphBitmap shear(const GlyphBitmap& g, int skew) {
    GlyphBitmap out = g;
    out.bits.assign(out.bits.size(), 0);
    for (int y = 0; y < g.height; ++y) {
      const int shift = skew * (g.height - 1 - y) / g.height;
      for (int x = 0; x < g.width; ++x)
        if (g.at(x, y) && x + shift < g.width) out.set(x + shift, y, 1);
    }
    return out;
  }

  // Decode needs injective glyph shapes within a face. Collisions after
  // dilation/shear are resolved by flipping a deterministic pixel.
  void enforce_distinct() {
    for (int i = 1; i < kNumPrintable; ++i) {
      if (glyphs_[i].empty_glyph()) glyphs_[i].set(i % cell_w_, 1 + i % (cell_h_ - 2), 1);
      for (int attempt = 0; attempt < 64; ++attempt) {
        bool clash = false;
        for (int j = 0; j < i; ++j)
          if (glyphs_[j] == glyphs_[i]) { clash = true; break; }
        if (!clash) break;
        const int px = (i * 7 + attempt) % cell_w_;
        const int py = 1 + (i * 13 + attempt * 3) % (cell_h_ - 2);
        glyphs_[i].set(px, py, glyphs_[i].at(px, py) ? 0 : 1);
      }
    }
  }

  int face_id_ = 0;
  int cell_w_ = 0;
  int cell_h_ = 0;
  bool bold_dilate_ = false;
  int italic_shear_ = 0;
  std::vector<GlyphBitmap> glyphs_;
};

}  // namespace glyph
