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

#include <sstream>

#include "glyph/glyph.hpp"

TEST(Rng, Deterministic) {
  glyph::Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, BoundedDrawsStayInRange) {
  glyph::Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    const int v = rng.uniform_int(3, 9);
    EXPECT_GE(v, 3);
    EXPECT_LE(v, 9);
    const double u = rng.uniform01();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Rng, SpawnedStreamsDiffer) {
  glyph::Rng parent(5);
  glyph::Rng a = parent.spawn(1), b = parent.spawn(2);
  int same = 0;
  for (int i = 0; i < 64; ++i)
    if (a.next_u64() == b.next_u64()) ++same;
  EXPECT_EQ(same, 0);
}

TEST(Rect, ContainsAndOverlaps) {
  glyph::Rect r{10, 20, 5, 5};
  EXPECT_TRUE(r.contains(10, 20));
  EXPECT_TRUE(r.contains(14, 24));
  EXPECT_FALSE(r.contains(15, 20));
  EXPECT_FALSE(r.contains(10, 25));
  EXPECT_TRUE(r.overlaps({14, 24, 10, 10}));
  EXPECT_FALSE(r.overlaps({15, 20, 10, 10}));
}

TEST(Atlas, GlyphsDistinctWithinFace) {
  const auto atlas = glyph::FontAtlas::synthesize(0, 12345, false, 0);
  for (char a = glyph::kFirstPrintable + 1; a <= glyph::kLastPrintable; ++a)
    for (char b = static_cast<char>(a + 1); b <= glyph::kLastPrintable; ++b)
      EXPECT_FALSE(atlas.bitmap(a) == atlas.bitmap(b)) << int(a) << " vs " << int(b);
}

TEST(Atlas, SaveLoadRoundtrip) {
  const auto atlas = glyph::FontAtlas::synthesize(3, 999, true, 2);
  std::stringstream ss;
  atlas.save(ss);
  const auto loaded = glyph::FontAtlas::load(ss, 3);
  for (char c = glyph::kFirstPrintable; c <= glyph::kLastPrintable; ++c)
    EXPECT_TRUE(atlas.bitmap(c) == loaded.bitmap(c)) << int(c);
}

TEST(Atlas, SpaceIsEmpty) {
  const auto atlas = glyph::FontAtlas::synthesize(0, 42, false, 0);
  EXPECT_TRUE(atlas.bitmap(' ').empty_glyph());
}

TEST(Codebook, RoundtripThroughJson) {
  const auto cb = glyph::FontCodebook::build(11, 16, 8, 8);
  const auto cb2 = glyph::FontCodebook::from_json(cb.to_json());
  EXPECT_EQ(cb2.num_fonts(), 16);
  EXPECT_EQ(cb2.num_colors(), 8);
  for (int f = 0; f < 16; ++f) {
    for (char c = glyph::kFirstPrintable; c <= glyph::kLastPrintable; ++c)
      ASSERT_TRUE(cb.font(f).bitmap(c) == cb2.font(f).bitmap(c));
    EXPECT_EQ(cb.font_embedding(f), cb2.font_embedding(f));
  }
  for (int c = 0; c < 8; ++c) {
    EXPECT_TRUE(cb.color(c) == cb2.color(c));
    EXPECT_EQ(cb.color_embedding(c), cb2.color_embedding(c));
  }
}

TEST(Codebook, ColorsDistinctAndBright) {
  const auto cb = glyph::FontCodebook::build(0, 8, 100, 8);
  std::set<int> seen;
  for (int i = 0; i < cb.num_colors(); ++i) {
    const auto c = cb.color(i);
    EXPECT_GE(c.r + c.g + c.b, 96);
    EXPECT_TRUE(seen.insert((c.r << 16) | (c.g << 8) | c.b).second);
  }
}

TEST(Codebook, UnknownIdThrows) {
  const auto cb = glyph::FontCodebook::build(0, 8, 8, 8);
  try {
    cb.font(8);
    FAIL() << "expected throw";
  } catch (const glyph::Error& e) {
    EXPECT_EQ(e.code(), glyph::ErrorCode::kUnknownCodebookId);
    EXPECT_NE(std::string(e.what()).find("UNKNOWN_CODEBOOK_ID"), std::string::npos);
  }
  EXPECT_THROW(cb.color(-1), glyph::Error);
}

TEST(Raster, PpmRoundtrip) {
  glyph::RasterImage img(5, 3, {10, 20, 30});
  img.set(2, 1, {200, 100, 50});
  std::stringstream ss;
  glyph::write_ppm(ss, img);
  const auto back = glyph::read_ppm(ss);
  EXPECT_TRUE(img == back);
}

TEST(Prompt, SerializeMatchesGrammar) {
  glyph::GlyphDocument doc;
  doc.boxes.push_back({{0, 0, 10, 10}, "Hello", 7, 3, glyph::Align::kLeft});
  doc.boxes.push_back({{0, 0, 10, 10}, "World", 2, 9, glyph::Align::kLeft});
  EXPECT_EQ(glyph::serialize_prompt(doc),
            "Text \"Hello\" in [font-color-3], [font-type-7]. "
            "Text \"World\" in [font-color-9], [font-type-2].");
}

TEST(Prompt, RoundtripWithEscapes) {
  glyph::GlyphDocument doc;
  doc.boxes.push_back({{0, 0, 10, 10}, "say \"hi\" \\ there", 1, 2, glyph::Align::kLeft});
  const auto spec = glyph::parse_prompt(glyph::serialize_prompt(doc));
  ASSERT_EQ(spec.entries.size(), 1u);
  EXPECT_EQ(spec.entries[0].text, "say \"hi\" \\ there");
  EXPECT_EQ(spec.entries[0].color_id, 2);
  EXPECT_EQ(spec.entries[0].font_id, 1);
}

TEST(Prompt, RandomRoundtripProperty) {
  glyph::Rng rng(303);
  for (int trial = 0; trial < 500; ++trial) {
    glyph::GlyphDocument doc;
    const int boxes = rng.uniform_int(0, 4);
    for (int b = 0; b < boxes; ++b) {
      std::string text;
      const int len = rng.uniform_int(1, 20);
      for (int i = 0; i < len; ++i)
        text.push_back(static_cast<char>(rng.uniform_int(0x20, 0x7e)));
      doc.boxes.push_back({{0, 0, 1, 1}, text, rng.uniform_int(0, 511),
                           rng.uniform_int(0, 99), glyph::Align::kLeft});
    }
    const auto spec = glyph::parse_prompt(glyph::serialize_prompt(doc));
    ASSERT_EQ(spec.entries.size(), doc.boxes.size());
    for (size_t i = 0; i < doc.boxes.size(); ++i) {
      EXPECT_EQ(spec.entries[i].text, doc.boxes[i].text);
      EXPECT_EQ(spec.entries[i].font_id, doc.boxes[i].font_id);
      EXPECT_EQ(spec.entries[i].color_id, doc.boxes[i].color_id);
    }
  }
}

TEST(Prompt, CommaIsOptionalOnInput) {
  const auto spec = glyph::parse_prompt("Text \"Hi\" in [font-color-4] [font-type-2].");
  ASSERT_EQ(spec.entries.size(), 1u);
  EXPECT_EQ(spec.entries[0].color_id, 4);
  EXPECT_EQ(spec.entries[0].font_id, 2);
}

TEST(Prompt, MalformedReportsByteOffset) {
  try {
    glyph::parse_prompt("Text \"Hi\" in [font-colour-4], [font-type-2].");
    FAIL() << "expected throw";
  } catch (const glyph::Error& e) {
    EXPECT_EQ(e.code(), glyph::ErrorCode::kParseError);
    EXPECT_NE(std::string(e.what()).find("byte offset"), std::string::npos);
  }
}

TEST(Prompt, ResolveCodebookTokens) {
  const auto cb = glyph::FontCodebook::build(0, 8, 8, 4);
  glyph::PromptSpec spec;
  spec.entries.push_back({"ab", 3, 5});
  const auto toks = glyph::resolve_codebook_tokens(spec, cb);
  ASSERT_EQ(toks.size(), 4u);
  EXPECT_EQ(toks[0].kind, glyph::ResolvedToken::Kind::kByte);
  EXPECT_EQ(toks[0].byte, 'a');
  EXPECT_EQ(toks[2].kind, glyph::ResolvedToken::Kind::kColorEmbedding);
  EXPECT_EQ(toks[2].id, 3);
  EXPECT_EQ(toks[3].kind, glyph::ResolvedToken::Kind::kFontEmbedding);
  EXPECT_EQ(toks[3].id, 5);

  spec.entries[0].color_id = 99;
  EXPECT_THROW(glyph::resolve_codebook_tokens(spec, cb), glyph::Error);
}
