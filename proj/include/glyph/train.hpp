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

#include <ostream>
#include <vector>

#include <nlohmann/json.hpp>

#include "glyph/augment.hpp"
#include "glyph/contrastive.hpp"
#include "glyph/dataset.hpp"
#include "glyph/roi_align.hpp"

namespace glyph {

struct AlignHyper {
  double lr = 0.3;
  double temp_lr_scale = 0.1;  // damped updates keep log_temp from collapsing early
  int steps = 2000;
  int batch = 64;
  int hard_negatives = 0;  // G; 0 disables the hard-negative loss
  int roi_out = 3;         // S
  int dim = 32;            // D
  std::uint64_t seed = 0;
  bool renorm_after_roi = false;
  bool literal_hard_denominator = false;
  double temp_init = 1.0 / 0.07;
};

// Trainable state: the frozen visual tower, the trained text tower and the
// trained log-temperature.
struct AlignParams {
  VisualEncoder visual;
  TextEncoder text;
  double log_temp = 0.0;
  int roi_out = 3;
  bool renorm_after_roi = false;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["version"] = 1;
    j["roi_out"] = roi_out;
    j["renorm_after_roi"] = renorm_after_roi;
    j["log_temp"] = log_temp;
    j["visual"] = {{"rows", visual.projection.rows},
                   {"cols", visual.projection.cols},
                   {"data", visual.projection.a}};
    j["text"] = {{"rows", text.projection.rows},
                 {"cols", text.projection.cols},
                 {"data", text.projection.a}};
    return j;
  }

  static AlignParams from_json(const nlohmann::json& j) {
    AlignParams p;
    p.roi_out = j.at("roi_out").get<int>();
    p.renorm_after_roi = j.at("renorm_after_roi").get<bool>();
    p.log_temp = j.at("log_temp").get<double>();
    auto load_mat = [](const nlohmann::json& mj) {
      Mat m(mj.at("rows").get<int>(), mj.at("cols").get<int>());
      m.a = mj.at("data").get<Vec>();
      return m;
    };
    p.visual.projection = load_mat(j.at("visual"));
    p.text.projection = load_mat(j.at("text"));
    return p;
  }
};

// Precomputed per-box tensors. The visual tower is frozen, so every box
// embedding (anchor and augmented) is pooled once up front; only the text
// side is re-projected during training.
struct PreparedBox {
  Vec x;                         // pooled anchor embedding
  Vec phi;                       // raw text features of the anchor
  std::vector<Vec> negative_x;   // G augmented box embeddings
  std::vector<Vec> negative_phi; // G augmented text features
};

struct PreparedImage {
  std::vector<PreparedBox> boxes;
};

namespace detail {

inline Vec pool_box(const FeatureMap& normalized_fm, const Rect& bbox, int roi_out, bool renorm) {
  Vec x = roi_align(normalized_fm, bbox, roi_out);
  return renorm ? normalized(x) : x;
}

// Mutates a box's text until the mutation also fits the box, so the
// augmented pair can be realized on the image side as well. char-replace
// preserves length and always fits, so this terminates.
inline std::string renderable_mutation(const TextBox& box, const FontAtlas& atlas, Rng& rng) {
  const auto strategies = applicable_strategies(box.text);
  if (strategies.empty())
    throw Error(ErrorCode::kInapplicable, "no strategy applies to \"" + box.text + "\"");
  for (int attempt = 0; attempt < 64; ++attempt) {
    const auto strat = strategies[rng.next_below(strategies.size())];
    const std::string mutated = augment_text(box.text, strat, rng);
    if (mutated != box.text && fits_box(mutated, box, atlas)) return mutated;
  }
  AugmentStrategy replace{AugmentLevel::kCharacter, AugmentKind::kReplace};
  return augment_text(box.text, replace, rng);
}

}  // namespace detail

// Renders and pools every record (and G augmented variants per box).
inline std::vector<PreparedImage> prepare_images(const std::vector<DatasetRecord>& records,
                                                 const FontCodebook& codebook,
                                                 const AlignParams& params, int hard_negatives,
                                                 Rng& rng) {
  std::vector<PreparedImage> out;
  for (const auto& rec : records) {
    const RasterImage raster = rasterize(rec.doc, codebook);
    const FeatureMap fm =
        encode_image(raster, rec.doc.background, params.visual).normalized_cells();
    PreparedImage img;
    for (size_t bi = 0; bi < rec.doc.boxes.size(); ++bi) {
      const TextBox& box = rec.doc.boxes[bi];
      PreparedBox pb;
      pb.x = detail::pool_box(fm, box.bbox, params.roi_out, params.renorm_after_roi);
      pb.phi = text_features(box.text, box.color_id, box.font_id, codebook);
      for (int g = 0; g < hard_negatives; ++g) {
        // Augment both sides: mutate the text, re-render the document with
        // the mutated box, and pool the same region.
        const std::string mutated =
            detail::renderable_mutation(box, codebook.font(box.font_id), rng);
        GlyphDocument aug_doc = rec.doc;
        aug_doc.boxes[bi].text = mutated;
        const FeatureMap aug_fm =
            encode_image(rasterize(aug_doc, codebook), aug_doc.background, params.visual)
                .normalized_cells();
        pb.negative_x.push_back(
            detail::pool_box(aug_fm, box.bbox, params.roi_out, params.renorm_after_roi));
        pb.negative_phi.push_back(text_features(mutated, box.color_id, box.font_id, codebook));
      }
      img.boxes.push_back(std::move(pb));
    }
    out.push_back(std::move(img));
  }
  return out;
}

struct TrainStepStats {
  int step = 0;
  double loss_box = 0.0;
  double loss_hard = 0.0;
  double retrieval_at_1 = 0.0;
};

struct TrainResult {
  AlignParams params;
  std::vector<TrainStepStats> history;
  bool diverged = false;
};

// Fraction of boxes whose pooled embedding ranks its own text first among
// all candidate texts in `images`, under the current text tower. Candidates
// with identical raw text features are indistinguishable by construction, so
// retrieving a duplicate of the correct text counts as a hit.
inline double retrieval_at_1(const AlignParams& params, const std::vector<PreparedImage>& images) {
  std::vector<const Vec*> xs;
  std::vector<Vec> ys;
  std::vector<const Vec*> phis;
  for (const auto& img : images)
    for (const auto& b : img.boxes) {
      xs.push_back(&b.x);
      ys.push_back(normalized(params.text.projection.apply(b.phi)));
      phis.push_back(&b.phi);
    }
  if (xs.empty()) return 0.0;
  int hits = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    size_t best = 0;
    double best_sim = -1e300;
    for (size_t j = 0; j < ys.size(); ++j) {
      const double sim = dot(*xs[i], ys[j]);
      if (sim > best_sim) {
        best_sim = sim;
        best = j;
      }
    }
    if (best == i || *phis[best] == *phis[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(xs.size());
}

// Controlled single-box corpus for the alignment demo: one word per 96x32
// box, positions snapped to the visual patch grid, a single font and color.
// Free box geometry would couple the pooled features to render scale and
// grid phase, which the linear towers cannot factor out; this keeps the
// text-to-pixel relation learnable at desk scale.
inline std::vector<DatasetRecord> alignment_demo_records(int count, const FontCodebook& codebook,
                                                         std::uint64_t seed,
                                                         std::vector<std::string> corpus = {}) {
  if (corpus.empty()) corpus = default_corpus();
  constexpr int kCanvas = 128, kBoxW = 96, kBoxH = 32, kSnap = 16;
  Rng rng(seed);
  std::vector<DatasetRecord> out;
  while (static_cast<int>(out.size()) < count) {
    const std::string& text = corpus[rng.next_below(corpus.size())];
    if (static_cast<int>(text.size()) * 8 > kBoxW) continue;
    GlyphDocument doc;
    doc.width = kCanvas;
    doc.height = kCanvas;
    TextBox box;
    box.text = text;
    box.bbox = {static_cast<int>(rng.next_below((kCanvas - kBoxW) / kSnap + 1)) * kSnap,
                static_cast<int>(rng.next_below((kCanvas - kBoxH) / kSnap + 1)) * kSnap, kBoxW,
                kBoxH};
    box.font_id = 0;
    box.color_id = 0;
    box.align = Align::kLeft;
    doc.boxes.push_back(std::move(box));
    DatasetRecord rec;
    rec.id = static_cast<long long>(out.size());
    rec.doc = std::move(doc);
    out.push_back(std::move(rec));
  }
  return out;
}

// Char-perturbation discrimination: for each box, the anchor text must beat
// a character-level mutation of itself under the learned similarity.
inline double discrimination_accuracy(const AlignParams& params, const FontCodebook& codebook,
                                      const std::vector<DatasetRecord>& records,
                                      const std::vector<PreparedImage>& images, Rng& rng) {
  int total = 0, correct = 0;
  const std::array<AugmentStrategy, 3> char_strategies = {{
      {AugmentLevel::kCharacter, AugmentKind::kReplace},
      {AugmentLevel::kCharacter, AugmentKind::kDrop},
      {AugmentLevel::kCharacter, AugmentKind::kAdd},
  }};
  for (size_t ri = 0; ri < records.size(); ++ri) {
    const auto& rec = records[ri];
    for (size_t bi = 0; bi < rec.doc.boxes.size(); ++bi) {
      const TextBox& box = rec.doc.boxes[bi];
      AugmentStrategy strat = char_strategies[rng.next_below(char_strategies.size())];
      if (!strategy_applicable(box.text, strat))
        strat = {AugmentLevel::kCharacter, AugmentKind::kReplace};
      const std::string mutated = augment_text(box.text, strat, rng);
      const Vec y_true = encode_text(box.text, box.color_id, box.font_id, codebook, params.text);
      const Vec y_fake = encode_text(mutated, box.color_id, box.font_id, codebook, params.text);
      const Vec& x = images[ri].boxes[bi].x;
      if (dot(x, y_true) > dot(x, y_fake)) ++correct;
      ++total;
    }
  }
  return total ? static_cast<double>(correct) / total : 0.0;
}

// SGD on L_box + L_hard over precomputed tensors. The visual projection is
// frozen after seeded init; the text projection and log-temperature train.
inline TrainResult train_align(const std::vector<DatasetRecord>& records,
                               const FontCodebook& codebook, const AlignHyper& hyper) {
  if (records.empty()) throw Error(ErrorCode::kDimMismatch, "empty training set");
  Rng rng(hyper.seed);
  Rng visual_rng = rng.spawn(1), text_rng = rng.spawn(2), aug_rng = rng.spawn(3),
      batch_rng = rng.spawn(4);

  TrainResult result;
  result.params.visual = VisualEncoder::random(hyper.dim, visual_rng);
  result.params.text = TextEncoder::random(hyper.dim, codebook.emb_dim(), text_rng);
  result.params.log_temp = std::log(hyper.temp_init);
  result.params.roi_out = hyper.roi_out;
  result.params.renorm_after_roi = hyper.renorm_after_roi;

  const auto images = prepare_images(records, codebook, result.params, hyper.hard_negatives, aug_rng);

  Mat& w = result.params.text.projection;
  double eval_retrieval = 0.0;

  for (int step = 0; step < hyper.steps; ++step) {
    // Sample a batch of images (records), keeping box grouping.
    const int bsz = std::min<int>(hyper.batch, static_cast<int>(images.size()));
    std::vector<int> picks;
    for (int i = 0; i < bsz; ++i)
      picks.push_back(static_cast<int>(batch_rng.next_below(images.size())));

    // Forward: project text features for anchors and negatives.
    EmbeddingBatch batch;
    batch.log_temp = result.params.log_temp;
    HardNegativeBatch hard;
    struct YRef {
      const Vec* phi;
      Vec u;  // pre-normalization projection
      double r;
    };
    std::vector<YRef> yrefs;  // anchors then negatives, in grad order
    std::vector<YRef> neg_yrefs;

    for (int pick : picks) {
      const PreparedImage& img = images[pick];
      ImageBoxes ib;
      for (const auto& box : img.boxes) {
        Vec u = w.apply(box.phi);
        const double r = std::max(norm2(u), 1e-12);
        Vec y = u;
        for (auto& v : y) v /= r;
        ib.x.push_back(box.x);
        ib.y.push_back(std::move(y));
        yrefs.push_back({&box.phi, std::move(u), r});
        if (hyper.hard_negatives > 0) {
          std::vector<std::pair<Vec, Vec>> negs;
          for (size_t g = 0; g < box.negative_x.size(); ++g) {
            Vec ug = w.apply(box.negative_phi[g]);
            const double rg = std::max(norm2(ug), 1e-12);
            Vec yg = ug;
            for (auto& v : yg) v /= rg;
            negs.emplace_back(box.negative_x[g], std::move(yg));
            neg_yrefs.push_back({&box.negative_phi[g], std::move(ug), rg});
          }
          hard.negatives.push_back(std::move(negs));
        }
      }
      batch.images.push_back(std::move(ib));
    }

    const LossGrads box_grads = box_contrastive_loss(batch);
    LossGrads hard_grads;
    if (hyper.hard_negatives > 0)
      hard_grads = hard_negative_loss(batch, hard, hyper.literal_hard_denominator);

    // Backward through y = u/||u|| into the text projection.
    Mat dw(w.rows, w.cols);
    auto chain_into_w = [&](const Vec& gy, const YRef& ref) {
      const Vec y = normalized(ref.u);
      const double gy_dot_y = dot(gy, y);
      for (int r0 = 0; r0 < w.rows; ++r0) {
        const double du = (gy[r0] - gy_dot_y * y[r0]) / ref.r;
        if (du == 0.0) continue;
        double* row = &dw.a[static_cast<size_t>(r0) * w.cols];
        const Vec& phi = *ref.phi;
        for (int c = 0; c < w.cols; ++c) row[c] += du * phi[c];
      }
    };

    size_t yi = 0, ni = 0;
    int flat = 0;
    for (int pi = 0; pi < static_cast<int>(batch.images.size()); ++pi) {
      for (size_t bj = 0; bj < batch.images[pi].y.size(); ++bj, ++flat) {
        Vec gy = box_grads.dy[flat];
        if (hyper.hard_negatives > 0) axpy(1.0, hard_grads.dy[flat], &gy);
        chain_into_w(gy, yrefs[yi++]);
        if (hyper.hard_negatives > 0) {
          for (const auto& [gx, gyv] : hard_grads.dnegatives[flat]) {
            (void)gx;  // visual side is frozen
            chain_into_w(gyv, neg_yrefs[ni++]);
          }
        }
      }
    }

    double dlt = box_grads.dlog_temp;
    if (hyper.hard_negatives > 0) dlt += hard_grads.dlog_temp;

    const double total_loss = box_grads.loss + (hyper.hard_negatives > 0 ? hard_grads.loss : 0.0);
    if (!std::isfinite(total_loss)) {
      result.diverged = true;
      break;
    }

    for (size_t i = 0; i < w.a.size(); ++i) w.a[i] -= hyper.lr * dw.a[i];
    result.params.log_temp -= hyper.lr * hyper.temp_lr_scale * dlt;

    if (step % 100 == 0 || step + 1 == hyper.steps)
      eval_retrieval = retrieval_at_1(result.params, images);
    result.history.push_back(
        {step, box_grads.loss, hyper.hard_negatives > 0 ? hard_grads.loss : 0.0, eval_retrieval});
  }
  return result;
}

inline void write_history_csv(std::ostream& os, const std::vector<TrainStepStats>& history) {
  os << "step,loss_box,loss_hard,retrieval@1\n";
  for (const auto& row : history)
    os << row.step << "," << row.loss_box << "," << row.loss_hard << "," << row.retrieval_at_1
       << "\n";
}

}  // namespace glyph
