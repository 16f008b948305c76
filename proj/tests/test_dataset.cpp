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

#include <filesystem>
#include <fstream>

#include "glyph/glyph.hpp"

namespace fs = std::filesystem;

namespace {

const glyph::FontCodebook& small_codebook() {
  static const glyph::FontCodebook cb = glyph::FontCodebook::build(3, 16, 12, 8);
  return cb;
}

glyph::GenerateConfig small_config() {
  glyph::GenerateConfig cfg;
  cfg.count = 30;
  cfg.seed = 3;
  cfg.canvas_w = 256;
  cfg.canvas_h = 256;
  cfg.write_images = false;
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Dataset, RecordJsonRoundtrip) {
  const auto rec = glyph::generate_record(small_config(), small_codebook(), 5);
  const auto back = glyph::record_from_json(record_to_json(rec));
  EXPECT_EQ(back.id, rec.id);
  EXPECT_EQ(back.prompt, rec.prompt);
  EXPECT_EQ(back.split, rec.split);
  EXPECT_TRUE(back.doc.background == rec.doc.background);
  ASSERT_EQ(back.doc.boxes.size(), rec.doc.boxes.size());
  for (size_t i = 0; i < rec.doc.boxes.size(); ++i) {
    EXPECT_EQ(back.doc.boxes[i].text, rec.doc.boxes[i].text);
    EXPECT_EQ(back.doc.boxes[i].font_id, rec.doc.boxes[i].font_id);
    EXPECT_EQ(back.doc.boxes[i].color_id, rec.doc.boxes[i].color_id);
    EXPECT_EQ(back.doc.boxes[i].align, rec.doc.boxes[i].align);
    EXPECT_EQ(back.doc.boxes[i].bbox.x, rec.doc.boxes[i].bbox.x);
    EXPECT_EQ(back.doc.boxes[i].bbox.w, rec.doc.boxes[i].bbox.w);
  }
}

TEST(Dataset, RecordsAreDeterministicPerId) {
  const auto cfg = small_config();
  for (long long id : {0LL, 7LL, 19LL}) {
    const auto a = glyph::generate_record(cfg, small_codebook(), id);
    const auto b = glyph::generate_record(cfg, small_codebook(), id);
    EXPECT_EQ(record_to_json(a).dump(), record_to_json(b).dump());
  }
}

TEST(Dataset, BoxesNeverOverlapOrLeaveCanvas) {
  const auto cfg = small_config();
  for (long long id = 0; id < 30; ++id) {
    const auto rec = glyph::generate_record(cfg, small_codebook(), id);
    ASSERT_FALSE(rec.doc.boxes.empty());
    for (size_t i = 0; i < rec.doc.boxes.size(); ++i) {
      const auto& b = rec.doc.boxes[i].bbox;
      EXPECT_GE(b.x, 0);
      EXPECT_GE(b.y, 0);
      EXPECT_LE(b.right(), cfg.canvas_w);
      EXPECT_LE(b.bottom(), cfg.canvas_h);
      for (size_t j = i + 1; j < rec.doc.boxes.size(); ++j)
        EXPECT_FALSE(b.overlaps(rec.doc.boxes[j].bbox));
    }
  }
}

TEST(Dataset, PromptMatchesBoxes) {
  const auto cfg = small_config();
  for (long long id = 0; id < 10; ++id) {
    const auto rec = glyph::generate_record(cfg, small_codebook(), id);
    const auto spec = glyph::parse_prompt(rec.prompt);
    ASSERT_EQ(spec.entries.size(), rec.doc.boxes.size());
    for (size_t i = 0; i < spec.entries.size(); ++i) {
      EXPECT_EQ(spec.entries[i].text, rec.doc.boxes[i].text);
      EXPECT_EQ(spec.entries[i].font_id, rec.doc.boxes[i].font_id);
      EXPECT_EQ(spec.entries[i].color_id, rec.doc.boxes[i].color_id);
    }
  }
}

TEST(Dataset, ParagraphRecordsSpanMultipleLines) {
  auto cfg = small_config();
  cfg.word_weight = 0.0;
  cfg.sentence_weight = 0.0;
  cfg.paragraph_weight = 1.0;
  int paragraphs = 0;
  for (long long id = 0; id < 10; ++id) {
    const auto rec = glyph::generate_record(cfg, small_codebook(), id);
    EXPECT_EQ(rec.split, glyph::SampleMode::kParagraph);
    for (const auto& box : rec.doc.boxes) {
      EXPECT_GT(box.text.size(), 100u);
      const auto plan = glyph::layout_box(box.text, box, small_codebook().font(box.font_id));
      EXPECT_GE(plan.lines.size(), 2u) << box.text;
      ++paragraphs;
    }
  }
  EXPECT_GT(paragraphs, 0);
}

TEST(Dataset, RenderedRecordsDecodeExactly) {
  const auto cfg = small_config();
  for (long long id = 0; id < 15; ++id) {
    const auto rec = glyph::generate_record(cfg, small_codebook(), id);
    const auto img = glyph::rasterize(rec.doc, small_codebook());
    const auto decoded = glyph::decode_glyph_image(img, rec.doc.boxes, small_codebook());
    ASSERT_EQ(decoded.size(), rec.doc.boxes.size());
    for (size_t i = 0; i < decoded.size(); ++i)
      EXPECT_EQ(glyph::join_words(decoded[i]), rec.doc.boxes[i].text) << "id=" << id;
  }
}

TEST(Dataset, ManifestIndependentOfWorkerCount) {
  auto cfg = small_config();
  cfg.count = 40;
  cfg.out_dir = (fs::temp_directory_path() / "glyph_ds_w1").string();
  const auto m1 = glyph::generate_dataset(cfg, small_codebook());
  cfg.workers = 4;
  cfg.out_dir = (fs::temp_directory_path() / "glyph_ds_w4").string();
  const auto m4 = glyph::generate_dataset(cfg, small_codebook());
  EXPECT_EQ(slurp(m1), slurp(m4));
  fs::remove_all(fs::temp_directory_path() / "glyph_ds_w1");
  fs::remove_all(fs::temp_directory_path() / "glyph_ds_w4");
}

TEST(Dataset, ManifestLoadsBack) {
  auto cfg = small_config();
  cfg.count = 10;
  cfg.out_dir = (fs::temp_directory_path() / "glyph_ds_load").string();
  const auto manifest = glyph::generate_dataset(cfg, small_codebook());
  const auto records = glyph::load_manifest(manifest.string());
  ASSERT_EQ(records.size(), 10u);
  for (long long id = 0; id < 10; ++id) EXPECT_EQ(records[id].id, id);
  fs::remove_all(cfg.out_dir);
}

TEST(Dataset, WritesDecodableImages) {
  auto cfg = small_config();
  cfg.count = 3;
  cfg.write_images = true;
  cfg.out_dir = (fs::temp_directory_path() / "glyph_ds_img").string();
  const auto manifest = glyph::generate_dataset(cfg, small_codebook());
  const auto records = glyph::load_manifest(manifest.string());
  for (const auto& rec : records) {
    std::ifstream is(fs::path(cfg.out_dir) / rec.image_path, std::ios::binary);
    ASSERT_TRUE(is.good()) << rec.image_path;
    const auto img = glyph::read_ppm(is);
    const auto decoded = glyph::decode_glyph_image(img, rec.doc.boxes, small_codebook());
    for (size_t i = 0; i < decoded.size(); ++i)
      EXPECT_EQ(glyph::join_words(decoded[i]), rec.doc.boxes[i].text);
  }
  fs::remove_all(cfg.out_dir);
}

TEST(Dataset, IsParagraphTextRule) {
  EXPECT_FALSE(glyph::is_paragraph_text("short text"));
  EXPECT_TRUE(glyph::is_paragraph_text("a b c d e f g h i j k"));  // 11 words
  EXPECT_TRUE(glyph::is_paragraph_text(std::string(101, 'x')));
  EXPECT_FALSE(glyph::is_paragraph_text(std::string(100, 'x')));
}

TEST(Dataset, EmptyCorpusThrows) {
  glyph::Rng rng(0);
  EXPECT_THROW(
      glyph::sample_document({}, small_codebook(), 256, 256, glyph::SampleMode::kWord, rng),
      glyph::Error);
}
