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

#include "glyph/codebook.hpp"
#include "glyph/linalg.hpp"
#include "glyph/raster.hpp"

namespace glyph {

// Output of the toy visual encoder: a H'xW' grid of D-dim cell features
// plus the source canvas dims for box-coordinate scaling.
struct FeatureMap {
  int grid_h = 0;
  int grid_w = 0;
  int dim = 0;
  int canvas_w = 0;
  int canvas_h = 0;
  std::vector<Vec> cells;  // row-major, grid_h * grid_w entries

  const Vec& cell(int gx, int gy) const { return cells[static_cast<size_t>(gy) * grid_w + gx]; }
  Vec& cell(int gx, int gy) { return cells[static_cast<size_t>(gy) * grid_w + gx]; }

  // Per-cell unit normalization, the f(I)/||f(I)||_2 step applied before
  // region pooling.
  FeatureMap normalized_cells() const {
    FeatureMap out = *this;
    for (auto& c : out.cells) c = normalized(c);
    return out;
  }
};

inline constexpr int kPatchSize = 16;
inline constexpr int kCoverageGrid = 4;  // binary coverage pooled to 4x4 sub-blocks
// mean R,G,B + whole-patch coverage + sub-block coverage + bias
inline constexpr int kVisualRawDim = 3 + 1 + kCoverageGrid * kCoverageGrid + 1;

// Toy visual tower: a frozen affine projection of per-patch statistics.
struct VisualEncoder {
  Mat projection;  // D x kVisualRawDim

  static VisualEncoder random(int dim, Rng& rng) {
    return VisualEncoder{Mat::random(dim, kVisualRawDim, rng, 1.0)};
  }
};

// Per-patch mean-RGB plus binary-coverage features, projected to D.
inline FeatureMap encode_image(const RasterImage& img, Rgb background, const VisualEncoder& enc) {
  if (img.width % kPatchSize != 0 || img.height % kPatchSize != 0)
    throw Error(ErrorCode::kBadDims, "raster dims must be divisible by patch size");
  FeatureMap fm;
  fm.grid_w = img.width / kPatchSize;
  fm.grid_h = img.height / kPatchSize;
  fm.dim = enc.projection.rows;
  fm.canvas_w = img.width;
  fm.canvas_h = img.height;
  fm.cells.resize(static_cast<size_t>(fm.grid_w) * fm.grid_h);
  constexpr int kSub = kPatchSize / kCoverageGrid;
  for (int gy = 0; gy < fm.grid_h; ++gy)
    for (int gx = 0; gx < fm.grid_w; ++gx) {
      double r = 0, g = 0, b = 0, cov = 0;
      double sub[kCoverageGrid * kCoverageGrid] = {};
      for (int y = 0; y < kPatchSize; ++y)
        for (int x = 0; x < kPatchSize; ++x) {
          const Rgb p = img.at(gx * kPatchSize + x, gy * kPatchSize + y);
          r += p.r;
          g += p.g;
          b += p.b;
          if (p != background) {
            cov += 1.0;
            sub[(y / kSub) * kCoverageGrid + x / kSub] += 1.0;
          }
        }
      const double inv = 1.0 / (255.0 * kPatchSize * kPatchSize);
      Vec raw(kVisualRawDim, 0.0);
      raw[0] = r * inv;
      raw[1] = g * inv;
      raw[2] = b * inv;
      raw[3] = cov / (kPatchSize * kPatchSize);
      for (int i = 0; i < kCoverageGrid * kCoverageGrid; ++i)
        raw[4 + i] = sub[i] / (kSub * kSub);
      raw.back() = 1.0;
      fm.cell(gx, gy) = enc.projection.apply(raw);
    }
  return fm;
}

inline constexpr int kBigramBins = 128;

// Raw feature width for the toy text tower given a codebook embedding dim.
inline int text_feature_dim(int codebook_emb_dim) {
  return kNumPrintable + kBigramBins + 2 * codebook_emb_dim + 1;
}

// Byte unigram + hashed-bigram counts concatenated with the box's codebook
// embeddings and a bias slot.
inline Vec text_features(const std::string& text, int color_id, int font_id,
                         const FontCodebook& codebook) {
  const int dcb = codebook.emb_dim();
  Vec f(text_feature_dim(dcb), 0.0);
  for (char c : text) {
    if (c >= kFirstPrintable && c <= kLastPrintable) f[c - kFirstPrintable] += 1.0;
  }
  for (size_t i = 0; i + 1 < text.size(); ++i) {
    const unsigned a = static_cast<unsigned char>(text[i]);
    const unsigned b = static_cast<unsigned char>(text[i + 1]);
    f[kNumPrintable + (a * 31 + b) % kBigramBins] += 1.0;
  }
  // Scale counts down so long texts do not swamp the codebook slots.
  const double inv = 1.0 / std::sqrt(1.0 + static_cast<double>(text.size()));
  for (int i = 0; i < kNumPrintable + kBigramBins; ++i) f[i] *= inv;
  const auto& ce = codebook.color_embedding(color_id);
  const auto& fe = codebook.font_embedding(font_id);
  for (int i = 0; i < dcb; ++i) f[kNumPrintable + kBigramBins + i] = ce[i];
  for (int i = 0; i < dcb; ++i) f[kNumPrintable + kBigramBins + dcb + i] = fe[i];
  f.back() = 1.0;
  return f;
}

// Toy text tower: trainable projection of text_features, L2-normalized.
struct TextEncoder {
  Mat projection;  // D x text_feature_dim

  static TextEncoder random(int dim, int codebook_emb_dim, Rng& rng) {
    return TextEncoder{Mat::random(dim, text_feature_dim(codebook_emb_dim), rng,
                                   1.0 / std::sqrt(text_feature_dim(codebook_emb_dim)))};
  }
};

inline Vec encode_text(const std::string& text, int color_id, int font_id,
                       const FontCodebook& codebook, const TextEncoder& enc) {
  return normalized(enc.projection.apply(text_features(text, color_id, font_id, codebook)));
}

}  // namespace glyph
