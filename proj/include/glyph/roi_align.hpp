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

#include <algorithm>

#include "glyph/encoders.hpp"

namespace glyph {

namespace detail {

// Bilinear sample at continuous feature-grid coords, cell centers at
// (i+0.5, j+0.5), coordinates clamped to the grid.
inline void bilinear_accumulate(const FeatureMap& fm, double u, double v, double weight, Vec* acc) {
  double x = std::clamp(u - 0.5, 0.0, static_cast<double>(fm.grid_w - 1));
  double y = std::clamp(v - 0.5, 0.0, static_cast<double>(fm.grid_h - 1));
  const int x0 = static_cast<int>(x), y0 = static_cast<int>(y);
  const int x1 = std::min(x0 + 1, fm.grid_w - 1), y1 = std::min(y0 + 1, fm.grid_h - 1);
  const double fx = x - x0, fy = y - y0;
  const double w00 = (1 - fx) * (1 - fy), w10 = fx * (1 - fy), w01 = (1 - fx) * fy, w11 = fx * fy;
  const Vec& c00 = fm.cell(x0, y0);
  const Vec& c10 = fm.cell(x1, y0);
  const Vec& c01 = fm.cell(x0, y1);
  const Vec& c11 = fm.cell(x1, y1);
  for (int d = 0; d < fm.dim; ++d)
    (*acc)[d] += weight * (w00 * c00[d] + w10 * c10[d] + w01 * c01[d] + w11 * c11[d]);
}

}  // namespace detail

// SxS-bin ROIAlign with 2x2 bilinear samples per bin, averaged per bin and
// then averaged over bins. No renormalization after pooling.
inline Vec roi_align(const FeatureMap& fm, const Rect& box, int out_size = 3) {
  if (out_size < 1) throw Error(ErrorCode::kBadDims, "out_size must be >= 1");
  if (box.right() <= 0 || box.x >= fm.canvas_w || box.bottom() <= 0 || box.y >= fm.canvas_h)
    throw Error(ErrorCode::kEmptyIntersection, "box does not intersect the canvas");
  const double sx = static_cast<double>(fm.grid_w) / fm.canvas_w;
  const double sy = static_cast<double>(fm.grid_h) / fm.canvas_h;
  const double fx0 = box.x * sx, fy0 = box.y * sy;
  const double bw = box.w * sx / out_size, bh = box.h * sy / out_size;

  Vec acc(fm.dim, 0.0);
  const double sample_weight = 1.0 / (4.0 * out_size * out_size);
  for (int by = 0; by < out_size; ++by)
    for (int bx = 0; bx < out_size; ++bx)
      for (int iy = 0; iy < 2; ++iy)
        for (int ix = 0; ix < 2; ++ix) {
          const double u = fx0 + (bx + (ix + 0.5) / 2.0) * bw;
          const double v = fy0 + (by + (iy + 0.5) / 2.0) * bh;
          detail::bilinear_accumulate(fm, u, v, sample_weight, &acc);
        }
  return acc;
}

}  // namespace glyph
