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
#include <cmath>
#include <vector>

#include "glyph/linalg.hpp"

namespace glyph {

// One image's boxes: pooled box embeddings x and unit-norm text embeddings y.
struct ImageBoxes {
  std::vector<Vec> x;
  std::vector<Vec> y;
};

// All symbols of the two alignment losses: the per-image box embeddings and
// the learnable temperature t = exp(log_temp).
struct EmbeddingBatch {
  std::vector<ImageBoxes> images;
  double log_temp = 0.0;

  int total_boxes() const {
    int n = 0;
    for (const auto& im : images) n += static_cast<int>(im.x.size());
    return n;
  }
};

// Per-anchor augmented pairs for the hard-negative loss.
struct HardNegativeBatch {
  // negatives[m] holds the G augmented (x, y) pairs of flattened anchor m.
  std::vector<std::vector<std::pair<Vec, Vec>>> negatives;
};

struct LossGrads {
  double loss = 0.0;
  std::vector<Vec> dx, dy;  // flattened anchor order (image order, box order)
  std::vector<std::vector<std::pair<Vec, Vec>>> dnegatives;  // hard loss only
  double dlog_temp = 0.0;
};

namespace detail {

inline double log_sum_exp(const std::vector<double>& v) {
  double m = v[0];
  for (double x : v) m = std::max(m, x);
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

inline void flatten(const EmbeddingBatch& batch, std::vector<const Vec*>* xs,
                    std::vector<const Vec*>* ys) {
  for (const auto& im : batch.images) {
    if (im.x.size() != im.y.size())
      throw Error(ErrorCode::kDimMismatch, "x/y count mismatch within image");
    for (size_t j = 0; j < im.x.size(); ++j) {
      xs->push_back(&im.x[j]);
      ys->push_back(&im.y[j]);
    }
  }
}

}  // namespace detail

// Symmetric box-level InfoNCE: each (box crop, box text) pair is an
// instance; both normalizers sum over every box of every image in the
// batch. Returns the scalar and analytic gradients wrt x, y and log t.
inline LossGrads box_contrastive_loss(const EmbeddingBatch& batch) {
  std::vector<const Vec*> xs, ys;
  detail::flatten(batch, &xs, &ys);
  const int n = static_cast<int>(xs.size());
  if (n < 1) throw Error(ErrorCode::kDimMismatch, "batch has no boxes");
  const int dim = static_cast<int>(xs[0]->size());
  const double t = std::exp(batch.log_temp);

  // Full similarity matrix s[m][k] = t * x_m . y_k.
  std::vector<std::vector<double>> s(n, std::vector<double>(n));
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k) s[m][k] = t * dot(*xs[m], *ys[k]);

  LossGrads out;
  out.dx.assign(n, Vec(dim, 0.0));
  out.dy.assign(n, Vec(dim, 0.0));

  // Row softmax p (anchor x_m over all y) and column softmax q (anchor y_k
  // over all x), both through a log-sum-exp path.
  std::vector<std::vector<double>> p(n, std::vector<double>(n)), q(n, std::vector<double>(n));
  double loss = 0.0, dls = 0.0;
  for (int m = 0; m < n; ++m) {
    const double lse = detail::log_sum_exp(s[m]);
    for (int k = 0; k < n; ++k) p[m][k] = std::exp(s[m][k] - lse);
    loss += s[m][m] - lse;
    double row_s = 0.0;
    for (int k = 0; k < n; ++k) row_s += p[m][k] * s[m][k];
    dls += s[m][m] - row_s;
  }
  for (int k = 0; k < n; ++k) {
    std::vector<double> col(n);
    for (int m = 0; m < n; ++m) col[m] = s[m][k];
    const double lse = detail::log_sum_exp(col);
    for (int m = 0; m < n; ++m) q[m][k] = std::exp(s[m][k] - lse);
    loss += s[k][k] - lse;
    double col_s = 0.0;
    for (int m = 0; m < n; ++m) col_s += q[m][k] * s[m][k];
    dls += s[k][k] - col_s;
  }

  const double scale = -1.0 / (2.0 * n);
  out.loss = scale * loss;
  out.dlog_temp = scale * dls;
  for (int m = 0; m < n; ++m) {
    axpy(2.0 * scale * t, *ys[m], &out.dx[m]);
    axpy(2.0 * scale * t, *xs[m], &out.dy[m]);
    for (int k = 0; k < n; ++k) {
      axpy(-scale * t * (p[m][k] + q[m][k]), *ys[k], &out.dx[m]);
      axpy(-scale * t * (p[k][m] + q[k][m]), *xs[k], &out.dy[m]);
    }
  }
  if (!std::isfinite(out.loss)) throw Error(ErrorCode::kNonFinite, "box loss diverged");
  return out;
}

// Per-box softmax over that box's own augmented set. By default the
// positive pair joins each denominator so every per-side term is a proper
// log-probability; `literal_denominator` keeps the negatives-only sum.
inline LossGrads hard_negative_loss(const EmbeddingBatch& batch, const HardNegativeBatch& negatives,
                                    bool literal_denominator = false) {
  std::vector<const Vec*> xs, ys;
  detail::flatten(batch, &xs, &ys);
  const int n = static_cast<int>(xs.size());
  if (n < 1) throw Error(ErrorCode::kDimMismatch, "batch has no boxes");
  if (static_cast<int>(negatives.negatives.size()) != n)
    throw Error(ErrorCode::kDimMismatch, "negatives must cover every box");
  const int dim = static_cast<int>(xs[0]->size());
  const double t = std::exp(batch.log_temp);

  LossGrads out;
  out.dx.assign(n, Vec(dim, 0.0));
  out.dy.assign(n, Vec(dim, 0.0));
  out.dnegatives.resize(n);

  const double scale = -1.0 / (2.0 * n);
  double loss = 0.0, dls = 0.0;
  for (int m = 0; m < n; ++m) {
    const auto& negs = negatives.negatives[m];
    const int g_count = static_cast<int>(negs.size());
    if (g_count < 1) throw Error(ErrorCode::kDimMismatch, "G must be >= 1 for every box");
    out.dnegatives[m].assign(g_count, {Vec(dim, 0.0), Vec(dim, 0.0)});
    const double s_pos = t * dot(*xs[m], *ys[m]);

    for (int side = 0; side < 2; ++side) {
      // side 0: anchor x_m against {y_m} u {y^g}; side 1: anchor y_m
      // against {x_m} u {x^g}.
      std::vector<double> logits;
      if (!literal_denominator) logits.push_back(s_pos);
      for (const auto& [xg, yg] : negs)
        logits.push_back(t * dot(side == 0 ? *xs[m] : xg, side == 0 ? yg : *ys[m]));
      const double lse = detail::log_sum_exp(logits);
      loss += s_pos - lse;

      // d(s_pos - lse)/d logits, then chain into the embeddings.
      double row_s = 0.0;
      std::vector<double> prob(logits.size());
      for (size_t i = 0; i < logits.size(); ++i) {
        prob[i] = std::exp(logits[i] - lse);
        row_s += prob[i] * logits[i];
      }
      dls += s_pos - row_s;

      // Positive term appears in the numerator always, and in the
      // denominator unless literal.
      axpy(scale * t, *ys[m], &out.dx[m]);
      axpy(scale * t, *xs[m], &out.dy[m]);
      const size_t neg_off = literal_denominator ? 0 : 1;
      if (!literal_denominator) {
        axpy(-scale * t * prob[0], *ys[m], &out.dx[m]);
        axpy(-scale * t * prob[0], *xs[m], &out.dy[m]);
      }
      for (int g = 0; g < g_count; ++g) {
        const double pg = prob[neg_off + g];
        if (side == 0) {
          axpy(-scale * t * pg, negs[g].second, &out.dx[m]);
          axpy(-scale * t * pg, *xs[m], &out.dnegatives[m][g].second);
        } else {
          axpy(-scale * t * pg, negs[g].first, &out.dy[m]);
          axpy(-scale * t * pg, *ys[m], &out.dnegatives[m][g].first);
        }
      }
    }
  }
  out.loss = scale * loss;
  out.dlog_temp = scale * dls;
  if (!std::isfinite(out.loss)) throw Error(ErrorCode::kNonFinite, "hard-negative loss diverged");
  return out;
}

}  // namespace glyph
