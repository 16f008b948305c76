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
#include <ostream>
#include <set>
#include <vector>

#include "glyph/document.hpp"
#include "glyph/linalg.hpp"

namespace glyph {

// Pixel (or latent cell) to group id: 0 = global background, k >= 1 = the
// k-th text box.
struct PixelAssignment {
  int grid_w = 0;
  int grid_h = 0;
  std::vector<int> group;  // row-major, grid_h * grid_w

  int at(int x, int y) const { return group[static_cast<size_t>(y) * grid_w + x]; }
  int pixel_count() const { return grid_w * grid_h; }
};

// Token to group id: 0 = global prompt tokens, k >= 1 = glyph tokens of
// box k.
struct TokenGrouping {
  std::vector<int> group;  // one entry per token
  int token_count() const { return static_cast<int>(group.size()); }
};

// P x T boolean attention permission matrix.
struct AttentionMask {
  int pixels = 0;
  int tokens = 0;
  std::vector<std::uint8_t> allow;  // row-major

  bool at(int p, int t) const { return allow[static_cast<size_t>(p) * tokens + t] != 0; }
  void set(int p, int t, bool v) { allow[static_cast<size_t>(p) * tokens + t] = v ? 1 : 0; }

  static AttentionMask all_true(int pixels, int tokens) {
    AttentionMask m;
    m.pixels = pixels;
    m.tokens = tokens;
    m.allow.assign(static_cast<size_t>(pixels) * tokens, 1);
    return m;
  }
};

// Pixels inside a box join that box's group; overlaps resolve to the
// smallest-area box, ties to the lowest box index; everything else is
// global.
inline PixelAssignment assign_pixels(int grid_w, int grid_h, const std::vector<Rect>& boxes) {
  PixelAssignment pa;
  pa.grid_w = grid_w;
  pa.grid_h = grid_h;
  pa.group.assign(static_cast<size_t>(grid_w) * grid_h, 0);
  for (int y = 0; y < grid_h; ++y)
    for (int x = 0; x < grid_w; ++x) {
      int best = 0;
      long long best_area = 0;
      for (size_t k = 0; k < boxes.size(); ++k) {
        if (!boxes[k].contains(x, y)) continue;
        if (best == 0 || boxes[k].area() < best_area) {
          best = static_cast<int>(k) + 1;
          best_area = boxes[k].area();
        }
      }
      pa.group[static_cast<size_t>(y) * grid_w + x] = best;
    }
  return pa;
}

// mask[p,t] = (group(p) == group(t)). Every pixel group present must own at
// least one token, otherwise its rows would be empty.
inline AttentionMask build_attention_mask(const PixelAssignment& pa, const TokenGrouping& tg) {
  std::set<int> token_groups(tg.group.begin(), tg.group.end());
  for (int g : pa.group)
    if (!token_groups.count(g))
      throw Error(ErrorCode::kMissingGroup,
                  "pixel group " + std::to_string(g) + " has no tokens");
  AttentionMask m;
  m.pixels = pa.pixel_count();
  m.tokens = tg.token_count();
  m.allow.assign(static_cast<size_t>(m.pixels) * m.tokens, 0);
  for (int p = 0; p < m.pixels; ++p)
    for (int t = 0; t < m.tokens; ++t)
      if (pa.group[p] == tg.group[t]) m.set(p, t, true);
  return m;
}

// Multi-head cross-attention with an additive mask (logit + {0, -1e30}).
// Q: P x d, K: T x d, V: T x d_v; d and d_v must divide by `heads`.
// Returns P x d_v rows.
inline std::vector<Vec> masked_cross_attention(const std::vector<Vec>& q, const std::vector<Vec>& k,
                                               const std::vector<Vec>& v, const AttentionMask& mask,
                                               int heads) {
  const int pixels = static_cast<int>(q.size());
  const int tokens = static_cast<int>(k.size());
  if (tokens != static_cast<int>(v.size()) || pixels != mask.pixels || tokens != mask.tokens)
    throw Error(ErrorCode::kDimMismatch, "Q/K/V/mask row counts disagree");
  if (pixels == 0 || tokens == 0) throw Error(ErrorCode::kDimMismatch, "empty attention operands");
  const int d = static_cast<int>(q[0].size());
  const int dv = static_cast<int>(v[0].size());
  if (d != static_cast<int>(k[0].size()))
    throw Error(ErrorCode::kDimMismatch, "Q/K feature dims disagree");
  if (heads < 1 || d % heads != 0 || dv % heads != 0)
    throw Error(ErrorCode::kDimMismatch, "head count must divide d and d_v");

  const int hd = d / heads, hdv = dv / heads;
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(hd));
  constexpr double kMaskedLogit = -1e30;

  std::vector<Vec> out(pixels, Vec(dv, 0.0));
  std::vector<double> logits(tokens), weights(tokens);
  for (int p = 0; p < pixels; ++p) {
    for (int h = 0; h < heads; ++h) {
      double max_logit = -1e300;
      for (int t = 0; t < tokens; ++t) {
        double s = 0.0;
        for (int i = 0; i < hd; ++i) s += q[p][h * hd + i] * k[t][h * hd + i];
        s *= inv_sqrt;
        if (!mask.at(p, t)) s += kMaskedLogit;
        logits[t] = s;
        max_logit = std::max(max_logit, s);
      }
      double z = 0.0;
      for (int t = 0; t < tokens; ++t) {
        weights[t] = mask.at(p, t) ? std::exp(logits[t] - max_logit) : 0.0;
        z += weights[t];
      }
      if (z <= 0.0) throw Error(ErrorCode::kMissingGroup, "attention row has no allowed token");
      for (int t = 0; t < tokens; ++t) {
        const double w = weights[t] / z;
        if (w == 0.0) continue;
        for (int i = 0; i < hdv; ++i) out[p][h * hdv + i] += w * v[t][h * hdv + i];
      }
    }
  }
  return out;
}

// Returned per-row attention weights for one head, for inspection/tests.
inline std::vector<Vec> attention_weights(const std::vector<Vec>& q, const std::vector<Vec>& k,
                                          const AttentionMask& mask) {
  const int pixels = static_cast<int>(q.size());
  const int tokens = static_cast<int>(k.size());
  const int d = static_cast<int>(q[0].size());
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(d));
  std::vector<Vec> rows(pixels, Vec(tokens, 0.0));
  for (int p = 0; p < pixels; ++p) {
    double max_logit = -1e300;
    Vec logits(tokens, 0.0);
    for (int t = 0; t < tokens; ++t) {
      double s = 0.0;
      for (int i = 0; i < d; ++i) s += q[p][i] * k[t][i];
      logits[t] = s * inv_sqrt;
      if (mask.at(p, t)) max_logit = std::max(max_logit, logits[t]);
    }
    double z = 0.0;
    for (int t = 0; t < tokens; ++t) {
      rows[p][t] = mask.at(p, t) ? std::exp(logits[t] - max_logit) : 0.0;
      z += rows[p][t];
    }
    for (int t = 0; t < tokens; ++t) rows[p][t] /= z;
  }
  return rows;
}

// Two-layer ReLU MLP closing the gap between the glyph embedding space and
// the attention key/value space.
struct GlyphMapper {
  Mat w1;  // hidden x in_dim
  Vec b1;
  Mat w2;  // out_dim x hidden
  Vec b2;

  int in_dim() const { return w1.cols; }
  int out_dim() const { return w2.rows; }

  static GlyphMapper random(int in_dim, int hidden, int out_dim, Rng& rng) {
    GlyphMapper m;
    m.w1 = Mat::random(hidden, in_dim, rng, 1.0 / std::sqrt(in_dim));
    m.b1.assign(hidden, 0.0);
    m.w2 = Mat::random(out_dim, hidden, rng, 1.0 / std::sqrt(hidden));
    m.b2.assign(out_dim, 0.0);
    return m;
  }

  // Exact identity: relu(x) - relu(-x) = x with a 2D-wide hidden layer.
  static GlyphMapper identity(int dim) {
    GlyphMapper m;
    m.w1 = Mat(2 * dim, dim);
    m.b1.assign(2 * dim, 0.0);
    m.w2 = Mat(dim, 2 * dim);
    m.b2.assign(dim, 0.0);
    for (int i = 0; i < dim; ++i) {
      m.w1.at(i, i) = 1.0;
      m.w1.at(dim + i, i) = -1.0;
      m.w2.at(i, i) = 1.0;
      m.w2.at(i, dim + i) = -1.0;
    }
    return m;
  }

  Vec apply(const Vec& x) const {
    if (static_cast<int>(x.size()) != in_dim())
      throw Error(ErrorCode::kDimMismatch, "mapper input dim");
    Vec h = w1.apply(x);
    for (size_t i = 0; i < h.size(); ++i) h[i] = std::max(0.0, h[i] + b1[i]);
    Vec y = w2.apply(h);
    for (size_t i = 0; i < y.size(); ++i) y[i] += b2[i];
    return y;
  }
};

inline Vec map_glyph_embeddings(const Vec& embedding, const GlyphMapper& mapper) {
  return mapper.apply(embedding);
}

// PBM (P4) dump of the mask, one image row per pixel row.
inline void write_mask_pbm(std::ostream& os, const AttentionMask& mask) {
  os << "P4\n" << mask.tokens << " " << mask.pixels << "\n";
  const int row_bytes = (mask.tokens + 7) / 8;
  for (int p = 0; p < mask.pixels; ++p) {
    for (int b = 0; b < row_bytes; ++b) {
      std::uint8_t byte = 0;
      for (int i = 0; i < 8; ++i) {
        const int t = b * 8 + i;
        if (t < mask.tokens && mask.at(p, t)) byte |= static_cast<std::uint8_t>(0x80 >> i);
      }
      os.put(static_cast<char>(byte));
    }
  }
}

}  // namespace glyph
