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
#include <vector>

#include "glyph/raster.hpp"
#include "glyph/region_attn.hpp"

namespace glyph {

// Unit-range image used by the editing schedule.
struct FloatImage {
  int width = 0;
  int height = 0;
  std::vector<double> v;  // RGB interleaved

  FloatImage() = default;
  FloatImage(int w, int h, double fill = 0.0)
      : width(w), height(h), v(static_cast<size_t>(w) * h * 3, fill) {}

  static FloatImage from_raster(const RasterImage& img) {
    FloatImage f(img.width, img.height);
    for (size_t i = 0; i < img.data.size(); ++i) f.v[i] = img.data[i] / 255.0;
    return f;
  }

  RasterImage to_raster() const {
    RasterImage img(width, height, {0, 0, 0});
    for (size_t i = 0; i < v.size(); ++i) {
      const double c = std::clamp(v[i], 0.0, 1.0);
      img.data[i] = static_cast<std::uint8_t>(std::lround(c * 255.0));
    }
    return img;
  }
};

inline double rmse(const FloatImage& a, const FloatImage& b, const std::vector<std::uint8_t>& mask,
                   bool inside) {
  double sum = 0.0;
  long long count = 0;
  for (size_t p = 0; p < mask.size(); ++p) {
    if ((mask[p] != 0) != inside) continue;
    for (int c = 0; c < 3; ++c) {
      const double d = a.v[p * 3 + c] - b.v[p * 3 + c];
      sum += d * d;
    }
    count += 3;
  }
  return count ? std::sqrt(sum / static_cast<double>(count)) : 0.0;
}

// Per-pixel glyph-region flag derived from the box list.
inline std::vector<std::uint8_t> region_mask(int width, int height, const std::vector<Rect>& boxes) {
  const PixelAssignment pa = assign_pixels(width, height, boxes);
  std::vector<std::uint8_t> mask(pa.group.size());
  for (size_t i = 0; i < pa.group.size(); ++i) mask[i] = pa.group[i] >= 1 ? 1 : 0;
  return mask;
}

// Two-phase timestep list: steps in (t1, t0] denoise glyph regions only,
// steps in (0, t1] denoise the whole image.
struct SDEditSchedule {
  int t_max = 1000;
  int t0 = 800;
  int t1 = 300;

  struct Step {
    int t;
    bool region_only;
  };

  std::vector<Step> steps() const {
    std::vector<Step> out;
    for (int t = t0; t >= 1; --t) out.push_back({t, t > t1});
    return out;
  }
};

inline SDEditSchedule make_schedule(int t0, int t1, int t_max = 1000) {
  if (!(t_max >= t0 && t0 > t1 && t1 >= 0))
    throw Error(ErrorCode::kBadRange, "need T_max >= t0 > t1 >= 0");
  return SDEditSchedule{t_max, t0, t1};
}

// Ornstein-Uhlenbeck-style toy model: one denoise step contracts the clean
// estimate lambda of the way toward the target; sigma(t) = t / T_max.
struct ToyDenoiser {
  FloatImage target;
  double lambda = 0.05;
  int t_max = 1000;

  double sigma(int t) const { return static_cast<double>(std::max(t, 0)) / t_max; }
};

// Noisy latent carried through the schedule: the clean estimate plus the
// current noise level. The observable image is mean + sigma(t) * eps.
struct ToyLatent {
  FloatImage mean;
  double sigma = 0.0;

  FloatImage observe(Rng& rng) const {
    FloatImage out = mean;
    for (auto& x : out.v) x += sigma * rng.normal();
    return out;
  }
};

// One denoise step from t to t-1: masked pixels move lambda toward the
// target; the residual noise level drops to sigma(t-1). Unmasked pixels are
// left to the caller's blending rule.
inline ToyLatent toy_denoise_step(const ToyLatent& latent, int t, const ToyDenoiser& model,
                                  const std::vector<std::uint8_t>& mask) {
  if (t < 1) throw Error(ErrorCode::kBadRange, "t must be >= 1");
  ToyLatent out = latent;
  for (size_t p = 0; p < mask.size(); ++p) {
    if (!mask[p]) continue;
    for (int c = 0; c < 3; ++c) {
      const size_t i = p * 3 + c;
      out.mean.v[i] += model.lambda * (model.target.v[i] - out.mean.v[i]);
    }
  }
  out.sigma = model.sigma(t - 1);
  return out;
}

struct SDEditTrace {
  std::vector<int> step;
  std::vector<double> rmse_inside;   // vs target, glyph region
  std::vector<double> rmse_outside;  // vs original, background
};

// Region-wise SDEdit: noise to t0, denoise only glyph areas until t1 while
// re-noising the background from the original each step, then denoise the
// whole image. Returns the final image clipped to unit range.
inline FloatImage region_sdedit(const FloatImage& original, const std::vector<Rect>& boxes,
                                const SDEditSchedule& sched, const ToyDenoiser& model, Rng& rng,
                                SDEditTrace* trace = nullptr) {
  if (original.width != model.target.width || original.height != model.target.height)
    throw Error(ErrorCode::kDimMismatch, "original/target dims disagree");
  const auto mask = region_mask(original.width, original.height, boxes);
  const std::vector<std::uint8_t> all(mask.size(), 1);

  ToyLatent latent;
  latent.mean = original;
  latent.sigma = model.sigma(sched.t0);

  for (const auto& step : sched.steps()) {
    latent = toy_denoise_step(latent, step.t, model, step.region_only ? mask : all);
    if (step.region_only) {
      // Blended update: outside pixels are reset to the freshly-noised
      // original at the current noise level.
      for (size_t p = 0; p < mask.size(); ++p) {
        if (mask[p]) continue;
        for (int c = 0; c < 3; ++c) latent.mean.v[p * 3 + c] = original.v[p * 3 + c];
      }
    }
    if (trace) {
      trace->step.push_back(step.t - 1);
      const FloatImage observed = latent.observe(rng);
      trace->rmse_inside.push_back(rmse(observed, model.target, mask, true));
      trace->rmse_outside.push_back(rmse(observed, original, mask, false));
    }
  }

  FloatImage out = latent.observe(rng);  // sigma(0) = 0: the clean estimate
  for (auto& x : out.v) x = std::clamp(x, 0.0, 1.0);
  return out;
}

// Synthetic edit pair for demos and sweeps: the target rewrites the glyph
// region and drifts the background by a small smooth field, mimicking a
// denoiser that cannot keep the background pixel-exact.
struct ToyEditSetup {
  FloatImage original;
  FloatImage target;
  std::vector<Rect> boxes;
};

inline ToyEditSetup make_toy_edit_setup(int width, int height, double background_drift = 0.05) {
  ToyEditSetup setup;
  setup.original = FloatImage(width, height);
  setup.target = FloatImage(width, height);
  setup.boxes = {{width / 4, height / 4, width / 2, height / 2}};
  const auto& box = setup.boxes[0];
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      for (int c = 0; c < 3; ++c) {
        const size_t i = (static_cast<size_t>(y) * width + x) * 3 + c;
        const double base =
            0.5 + 0.2 * std::sin(0.37 * x + 0.61 * c) * std::cos(0.23 * y - 0.4 * c);
        setup.original.v[i] = base;
        if (box.contains(x, y)) {
          // New glyph content: a checker pattern unrelated to the original.
          setup.target.v[i] = ((x / 4 + y / 4) % 2 == 0) ? 0.85 : 0.15;
        } else {
          setup.target.v[i] =
              base + background_drift * std::sin(0.19 * x + 0.11 * y + 1.3 * c);
        }
      }
  return setup;
}

}  // namespace glyph
