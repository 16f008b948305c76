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

#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "glyph/atlas.hpp"
#include "glyph/common.hpp"

namespace glyph {

// Token codebook backing the `[font-type-k]` / `[font-color-k]` prompt
// tokens: a bitmap face per font token, an RGB triple per color token, and
// a learned-style global embedding per token.
class FontCodebook {
 public:
  struct FontSpec {
    std::uint64_t family_seed = 0;
    bool bold = false;
    int shear = 0;
  };

  static constexpr int kDefaultFonts = 512;
  static constexpr int kDefaultColors = 100;
  static constexpr int kDefaultEmbDim = 32;

  FontCodebook() = default;

  static FontCodebook build(std::uint64_t seed, int num_fonts = kDefaultFonts,
                            int num_colors = kDefaultColors, int emb_dim = kDefaultEmbDim) {
    FontCodebook cb;
    cb.seed_ = seed;
    cb.emb_dim_ = emb_dim;
    // Four style variants per glyph family: plain, bold, italic, bold italic.
    for (int k = 0; k < num_fonts; ++k) {
      FontSpec spec;
      spec.family_seed = Rng(seed).spawn(0x466f6e74ull + k / 4).next_u64();
      spec.bold = (k % 4 == 1) || (k % 4 == 3);
      spec.shear = (k % 4 >= 2) ? 2 : 0;
      cb.font_specs_.push_back(spec);
    }
    cb.colors_ = sample_colors(seed, num_colors);
    cb.materialize();
    return cb;
  }

  int num_fonts() const { return static_cast<int>(font_specs_.size()); }
  int num_colors() const { return static_cast<int>(colors_.size()); }
  int emb_dim() const { return emb_dim_; }
  std::uint64_t seed() const { return seed_; }

  const FontAtlas& font(int id) const {
    if (id < 0 || id >= num_fonts())
      throw Error(ErrorCode::kUnknownCodebookId, "font id " + std::to_string(id));
    return fonts_[id];
  }

  Rgb color(int id) const {
    if (id < 0 || id >= num_colors())
      throw Error(ErrorCode::kUnknownCodebookId, "color id " + std::to_string(id));
    return colors_[id];
  }

  const std::vector<double>& font_embedding(int id) const {
    if (id < 0 || id >= num_fonts())
      throw Error(ErrorCode::kUnknownCodebookId, "font id " + std::to_string(id));
    return font_emb_[id];
  }

  const std::vector<double>& color_embedding(int id) const {
    if (id < 0 || id >= num_colors())
      throw Error(ErrorCode::kUnknownCodebookId, "color id " + std::to_string(id));
    return color_emb_[id];
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["seed"] = seed_;
    j["emb_dim"] = emb_dim_;
    auto& fonts = j["fonts"] = nlohmann::ordered_json::array();
    for (const auto& f : font_specs_)
      fonts.push_back({{"family_seed", f.family_seed}, {"bold", f.bold}, {"shear", f.shear}});
    auto& colors = j["colors"] = nlohmann::ordered_json::array();
    for (const auto& c : colors_) colors.push_back({c.r, c.g, c.b});
    return j;
  }

  static FontCodebook from_json(const nlohmann::json& j) {
    FontCodebook cb;
    cb.seed_ = j.at("seed").get<std::uint64_t>();
    cb.emb_dim_ = j.at("emb_dim").get<int>();
    for (const auto& f : j.at("fonts"))
      cb.font_specs_.push_back({f.at("family_seed").get<std::uint64_t>(),
                                f.at("bold").get<bool>(), f.at("shear").get<int>()});
    for (const auto& c : j.at("colors"))
      cb.colors_.push_back({c.at(0).get<std::uint8_t>(), c.at(1).get<std::uint8_t>(),
                            c.at(2).get<std::uint8_t>()});
    cb.materialize();
    return cb;
  }

 private:
  // Distinct colors, bright enough to separate from the black background.
  static std::vector<Rgb> sample_colors(std::uint64_t seed, int n) {
    Rng rng(Rng(seed).spawn(0x436f6c6full).next_u64());
    std::vector<Rgb> colors;
    std::set<std::uint32_t> seen;
    while (static_cast<int>(colors.size()) < n) {
      Rgb c{static_cast<std::uint8_t>(rng.uniform_int(0, 255)),
            static_cast<std::uint8_t>(rng.uniform_int(0, 255)),
            static_cast<std::uint8_t>(rng.uniform_int(0, 255))};
      if (c.r + c.g + c.b < 96) continue;
      const std::uint32_t key = (c.r << 16) | (c.g << 8) | c.b;
      if (!seen.insert(key).second) continue;
      colors.push_back(c);
    }
    return colors;
  }

  void materialize() {
    fonts_.clear();
    for (size_t k = 0; k < font_specs_.size(); ++k) {
      const auto& s = font_specs_[k];
      fonts_.push_back(FontAtlas::synthesize(static_cast<int>(k), s.family_seed, s.bold, s.shear));
    }
    Rng emb_rng(Rng(seed_).spawn(0x456d62ull).next_u64());
    font_emb_.assign(font_specs_.size(), {});
    for (auto& e : font_emb_) {
      e.resize(emb_dim_);
      for (auto& v : e) v = emb_rng.normal();
    }
    color_emb_.assign(colors_.size(), {});
    for (auto& e : color_emb_) {
      e.resize(emb_dim_);
      for (auto& v : e) v = emb_rng.normal();
    }
  }

  std::uint64_t seed_ = 0;
  int emb_dim_ = kDefaultEmbDim;
  std::vector<FontSpec> font_specs_;
  std::vector<Rgb> colors_;
  std::vector<FontAtlas> fonts_;
  std::vector<std::vector<double>> font_emb_;
  std::vector<std::vector<double>> color_emb_;
};

}  // namespace glyph
