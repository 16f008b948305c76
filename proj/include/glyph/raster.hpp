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

#include <istream>
#include <ostream>
#include <vector>

#include "glyph/codebook.hpp"
#include "glyph/layout.hpp"

namespace glyph {

struct RasterImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // RGB, row-major

  RasterImage() = default;
  RasterImage(int w, int h, Rgb fill) : width(w), height(h), data(static_cast<size_t>(w) * h * 3) {
    for (size_t i = 0; i < data.size(); i += 3) {
      data[i] = fill.r;
      data[i + 1] = fill.g;
      data[i + 2] = fill.b;
    }
  }

  Rgb at(int x, int y) const {
    const size_t i = (static_cast<size_t>(y) * width + x) * 3;
    return {data[i], data[i + 1], data[i + 2]};
  }
  void set(int x, int y, Rgb c) {
    const size_t i = (static_cast<size_t>(y) * width + x) * 3;
    data[i] = c.r;
    data[i + 1] = c.g;
    data[i + 2] = c.b;
  }
  bool operator==(const RasterImage& o) const {
    return width == o.width && height == o.height && data == o.data;
  }
};

// Binary-coverage glyph blit: lit bitmap pixels scale up to sxs blocks of
// the box color, unlit pixels leave the canvas untouched.
inline void blit_glyph(RasterImage* img, const GlyphBitmap& g, int x0, int y0, int scale, Rgb color) {
  for (int gy = 0; gy < g.height; ++gy)
    for (int gx = 0; gx < g.width; ++gx) {
      if (!g.at(gx, gy)) continue;
      for (int sy = 0; sy < scale; ++sy)
        for (int sx = 0; sx < scale; ++sx) {
          const int px = x0 + gx * scale + sx, py = y0 + gy * scale + sy;
          if (px >= 0 && px < img->width && py >= 0 && py < img->height) img->set(px, py, color);
        }
    }
}

inline void render_box(RasterImage* img, const TextBox& box, const FontCodebook& codebook) {
  const FontAtlas& atlas = codebook.font(box.font_id);
  const Rgb color = codebook.color(box.color_id);
  const LayoutPlan plan = layout_box(box.text, box, atlas);
  const int gw = atlas.cell_width() * plan.scale;
  for (const auto& line : plan.lines) {
    int x = line.x;
    for (char c : line.fragment) {
      if (c != ' ') blit_glyph(img, atlas.bitmap(c), x, line.y, plan.scale, color);
      x += gw;
    }
  }
}

// Exact, anti-aliasing-free rendering: background everywhere, then each
// box's layout blitted in its codebook color.
inline RasterImage rasterize(const GlyphDocument& doc, const FontCodebook& codebook) {
  RasterImage img(doc.width, doc.height, doc.background);
  for (const auto& box : doc.boxes) render_box(&img, box, codebook);
  return img;
}

inline void write_ppm(std::ostream& os, const RasterImage& img) {
  os << "P6\n" << img.width << " " << img.height << "\n255\n";
  os.write(reinterpret_cast<const char*>(img.data.data()),
           static_cast<std::streamsize>(img.data.size()));
}

inline RasterImage read_ppm(std::istream& is) {
  std::string magic;
  int w = 0, h = 0, maxval = 0;
  is >> magic >> w >> h >> maxval;
  if (magic != "P6" || w < 1 || h < 1 || maxval != 255)
    throw Error(ErrorCode::kParseError, "bad PPM header");
  is.get();  // single whitespace after maxval
  RasterImage img(w, h, {0, 0, 0});
  is.read(reinterpret_cast<char*>(img.data.data()), static_cast<std::streamsize>(img.data.size()));
  if (!is) throw Error(ErrorCode::kIoError, "truncated PPM payload");
  return img;
}

}  // namespace glyph
