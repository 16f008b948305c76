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

#include <gtest/gtest.h>

#include <cmath>

#include "glyph/glyph.hpp"

namespace {

glyph::FeatureMap scalar_map(int gw, int gh, int canvas_w, int canvas_h,
                             const std::vector<double>& vals) {
  glyph::FeatureMap fm;
  fm.grid_w = gw;
  fm.grid_h = gh;
  fm.dim = 1;
  fm.canvas_w = canvas_w;
  fm.canvas_h = canvas_h;
  for (double v : vals) fm.cells.push_back({v});
  return fm;
}

// Independent reference for one bilinear sample with half-pixel centers and
// clamped coordinates.
double ref_sample(const glyph::FeatureMap& fm, double u, double v) {
  const double x = std::clamp(u - 0.5, 0.0, static_cast<double>(fm.grid_w - 1));
  const double y = std::clamp(v - 0.5, 0.0, static_cast<double>(fm.grid_h - 1));
  const int x0 = static_cast<int>(x), y0 = static_cast<int>(y);
  const int x1 = std::min(x0 + 1, fm.grid_w - 1), y1 = std::min(y0 + 1, fm.grid_h - 1);
  const double fx = x - x0, fy = y - y0;
  auto c = [&](int gx, int gy) { return fm.cell(gx, gy)[0]; };
  return (1 - fx) * (1 - fy) * c(x0, y0) + fx * (1 - fy) * c(x1, y0) +
         (1 - fx) * fy * c(x0, y1) + fx * fy * c(x1, y1);
}

double ref_roi(const glyph::FeatureMap& fm, const glyph::Rect& box, int s) {
  const double sx = static_cast<double>(fm.grid_w) / fm.canvas_w;
  const double sy = static_cast<double>(fm.grid_h) / fm.canvas_h;
  double acc = 0.0;
  for (int by = 0; by < s; ++by)
    for (int bx = 0; bx < s; ++bx)
      for (int iy = 0; iy < 2; ++iy)
        for (int ix = 0; ix < 2; ++ix)
          acc += ref_sample(fm, (box.x + (bx + (ix + 0.5) / 2.0) * box.w / s) * sx,
                            (box.y + (by + (iy + 0.5) / 2.0) * box.h / s) * sy);
  return acc / (4.0 * s * s);
}

}  // namespace

TEST(RoiAlign, FullCanvasOnTwoByTwoGridIsMean) {
  const auto fm = scalar_map(2, 2, 2, 2, {1, 2, 3, 4});
  for (int s = 1; s <= 4; ++s) {
    const auto out = glyph::roi_align(fm, {0, 0, 2, 2}, s);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_NEAR(out[0], 2.5, 1e-12) << "S=" << s;
  }
}

TEST(RoiAlign, ConstantFieldPoolsToConstant) {
  const auto fm = scalar_map(4, 4, 64, 64, std::vector<double>(16, 7.25));
  glyph::Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    glyph::Rect box{rng.uniform_int(-10, 60), rng.uniform_int(-10, 60), rng.uniform_int(1, 40),
                    rng.uniform_int(1, 40)};
    if (box.right() <= 0 || box.x >= 64 || box.bottom() <= 0 || box.y >= 64) continue;
    const auto out = glyph::roi_align(fm, box, 3);
    EXPECT_NEAR(out[0], 7.25, 1e-12);
  }
}

TEST(RoiAlign, MatchesIndependentReference) {
  glyph::Rng rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const int gw = rng.uniform_int(1, 6), gh = rng.uniform_int(1, 6);
    std::vector<double> vals;
    for (int i = 0; i < gw * gh; ++i) vals.push_back(rng.normal());
    const auto fm = scalar_map(gw, gh, gw * 16, gh * 16, vals);
    glyph::Rect box{rng.uniform_int(-8, gw * 16 - 1), rng.uniform_int(-8, gh * 16 - 1),
                    rng.uniform_int(1, gw * 16), rng.uniform_int(1, gh * 16)};
    if (box.right() <= 0 || box.bottom() <= 0) continue;
    const int s = rng.uniform_int(1, 4);
    const auto out = glyph::roi_align(fm, box, s);
    EXPECT_NEAR(out[0], ref_roi(fm, box, s), 1e-10);
  }
}

TEST(RoiAlign, DisjointBoxThrows) {
  const auto fm = scalar_map(2, 2, 32, 32, {1, 2, 3, 4});
  try {
    glyph::roi_align(fm, {40, 0, 8, 8}, 3);
    FAIL() << "expected throw";
  } catch (const glyph::Error& e) {
    EXPECT_EQ(e.code(), glyph::ErrorCode::kEmptyIntersection);
  }
  EXPECT_THROW(glyph::roi_align(fm, {0, -20, 8, 8}, 3), glyph::Error);
}

TEST(VisualEncoder, PatchStatisticsAreExact) {
  // Identity projection exposing the raw patch features directly.
  glyph::VisualEncoder enc;
  enc.projection = glyph::Mat(glyph::kVisualRawDim, glyph::kVisualRawDim);
  for (int i = 0; i < glyph::kVisualRawDim; ++i) enc.projection.at(i, i) = 1.0;

  glyph::RasterImage img(32, 16, {0, 0, 0});
  // Fill the left half of the first patch with a known color.
  for (int y = 0; y < 16; ++y)
    for (int x = 0; x < 8; ++x) img.set(x, y, {255, 128, 0});
  const auto fm = glyph::encode_image(img, {0, 0, 0}, enc);
  ASSERT_EQ(fm.grid_w, 2);
  ASSERT_EQ(fm.grid_h, 1);
  const auto& c0 = fm.cell(0, 0);
  EXPECT_NEAR(c0[0], 0.5, 1e-12);            // mean R: half the patch at 1.0
  EXPECT_NEAR(c0[1], 0.5 * 128 / 255.0, 1e-12);
  EXPECT_NEAR(c0[2], 0.0, 1e-12);
  EXPECT_NEAR(c0[3], 0.5, 1e-12);            // whole-patch coverage
  // Sub-block coverage: the two left columns of the 4x4 grid are full.
  for (int row = 0; row < glyph::kCoverageGrid; ++row)
    for (int col = 0; col < glyph::kCoverageGrid; ++col)
      EXPECT_NEAR(c0[4 + row * glyph::kCoverageGrid + col], col < 2 ? 1.0 : 0.0, 1e-12);
  EXPECT_NEAR(c0.back(), 1.0, 1e-12);        // bias
  const auto& c1 = fm.cell(1, 0);
  EXPECT_NEAR(c1[3], 0.0, 1e-12);
}

TEST(VisualEncoder, IndivisibleDimsThrow) {
  glyph::Rng rng(1);
  const auto enc = glyph::VisualEncoder::random(4, rng);
  glyph::RasterImage img(30, 32, {0, 0, 0});
  try {
    glyph::encode_image(img, {0, 0, 0}, enc);
    FAIL() << "expected throw";
  } catch (const glyph::Error& e) {
    EXPECT_EQ(e.code(), glyph::ErrorCode::kBadDims);
  }
}

TEST(FeatureMap, NormalizedCellsHaveUnitNorm) {
  glyph::Rng rng(2);
  const auto enc = glyph::VisualEncoder::random(8, rng);
  glyph::RasterImage img(64, 64, {30, 60, 90});
  img.set(5, 5, {200, 10, 10});
  const auto fm = glyph::encode_image(img, {30, 60, 90}, enc).normalized_cells();
  for (const auto& c : fm.cells) EXPECT_NEAR(glyph::norm2(c), 1.0, 1e-9);
}

TEST(TextFeatures, CountsAndScaling) {
  const auto cb = glyph::FontCodebook::build(0, 8, 8, 4);
  const auto f = glyph::text_features("aab", 2, 3, cb);
  ASSERT_EQ(static_cast<int>(f.size()), glyph::text_feature_dim(4));
  const double inv = 1.0 / std::sqrt(4.0);  // len 3
  EXPECT_NEAR(f['a' - 0x20], 2.0 * inv, 1e-12);
  EXPECT_NEAR(f['b' - 0x20], 1.0 * inv, 1e-12);
  EXPECT_NEAR(f['c' - 0x20], 0.0, 1e-12);
  // Codebook slots carry the embeddings verbatim.
  const auto& ce = cb.color_embedding(2);
  const auto& fe = cb.font_embedding(3);
  const int off = glyph::kNumPrintable + glyph::kBigramBins;
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(f[off + i], ce[i]);
    EXPECT_EQ(f[off + 4 + i], fe[i]);
  }
  EXPECT_EQ(f.back(), 1.0);
}

TEST(TextFeatures, DistinguishesAnagramsViaBigrams) {
  const auto cb = glyph::FontCodebook::build(0, 8, 8, 4);
  const auto fa = glyph::text_features("ab", 0, 0, cb);
  const auto fb = glyph::text_features("ba", 0, 0, cb);
  EXPECT_NE(fa, fb);
}

TEST(TextEncoder, OutputIsUnitNorm) {
  const auto cb = glyph::FontCodebook::build(0, 8, 8, 4);
  glyph::Rng rng(9);
  const auto enc = glyph::TextEncoder::random(16, 4, rng);
  const auto y = glyph::encode_text("Hello world", 1, 2, cb, enc);
  ASSERT_EQ(y.size(), 16u);
  EXPECT_NEAR(glyph::norm2(y), 1.0, 1e-9);
}
