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

#include <map>

#include "glyph/glyph.hpp"

using glyph::AugmentKind;
using glyph::AugmentLevel;
using glyph::AugmentStrategy;

namespace {
constexpr AugmentStrategy kCharReplace{AugmentLevel::kCharacter, AugmentKind::kReplace};
constexpr AugmentStrategy kCharRepeat{AugmentLevel::kCharacter, AugmentKind::kRepeat};
constexpr AugmentStrategy kCharDrop{AugmentLevel::kCharacter, AugmentKind::kDrop};
constexpr AugmentStrategy kCharAdd{AugmentLevel::kCharacter, AugmentKind::kAdd};
constexpr AugmentStrategy kWordReplace{AugmentLevel::kWord, AugmentKind::kReplace};
constexpr AugmentStrategy kWordRepeat{AugmentLevel::kWord, AugmentKind::kRepeat};
constexpr AugmentStrategy kWordDrop{AugmentLevel::kWord, AugmentKind::kDrop};
constexpr AugmentStrategy kWordAdd{AugmentLevel::kWord, AugmentKind::kAdd};

std::multiset<std::string> word_multiset(const std::string& s) {
  const auto w = glyph::split_words(s);
  return {w.begin(), w.end()};
}
}  // namespace

TEST(Augment, CharReplacePreservesLengthAndChangesOneChar) {
  glyph::Rng rng(1);
  for (int i = 0; i < 500; ++i) {
    const std::string out = glyph::augment_text("Happy", kCharReplace, rng);
    ASSERT_EQ(out.size(), 5u);
    int diff = 0;
    for (int j = 0; j < 5; ++j)
      if (out[j] != "Happy"[j]) ++diff;
    EXPECT_EQ(diff, 1);
  }
}

TEST(Augment, CharRepeatInsertsTwoToFourCopies) {
  glyph::Rng rng(2);
  for (int i = 0; i < 500; ++i) {
    const std::string out = glyph::augment_text("Happy", kCharRepeat, rng);
    ASSERT_GE(out.size(), 7u);
    ASSERT_LE(out.size(), 9u);
    // Deleting the repeated run must recover the original.
    bool recoverable = false;
    const size_t extra = out.size() - 5;
    for (size_t pos = 0; pos + extra <= out.size(); ++pos) {
      std::string trial = out;
      trial.erase(pos, extra);
      if (trial == "Happy") { recoverable = true; break; }
    }
    EXPECT_TRUE(recoverable) << out;
  }
}

TEST(Augment, CharDropRemovesExactlyOne) {
  glyph::Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    const std::string out = glyph::augment_text("Happy", kCharDrop, rng);
    ASSERT_EQ(out.size(), 4u);
    bool is_subseq = false;
    for (int skip = 0; skip < 5; ++skip) {
      std::string trial = "Happy";
      trial.erase(static_cast<size_t>(skip), 1);
      if (trial == out) { is_subseq = true; break; }
    }
    EXPECT_TRUE(is_subseq) << out;
  }
}

TEST(Augment, CharAddInsertsExactlyOne) {
  glyph::Rng rng(4);
  for (int i = 0; i < 500; ++i) {
    const std::string out = glyph::augment_text("Kim", kCharAdd, rng);
    ASSERT_EQ(out.size(), 4u);
    bool contains = false;
    for (size_t pos = 0; pos < out.size(); ++pos) {
      std::string trial = out;
      trial.erase(pos, 1);
      if (trial == "Kim") { contains = true; break; }
    }
    EXPECT_TRUE(contains) << out;
  }
}

TEST(Augment, WordReplaceIsAnAnagramOfOneWord) {
  glyph::Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    const std::string out = glyph::augment_text("Happy Graduation", kWordReplace, rng);
    const auto ow = glyph::split_words("Happy Graduation");
    const auto nw = glyph::split_words(out);
    ASSERT_EQ(nw.size(), 2u);
    int changed = 0;
    for (size_t j = 0; j < 2; ++j) {
      if (nw[j] == ow[j]) continue;
      ++changed;
      std::multiset<char> a(ow[j].begin(), ow[j].end()), b(nw[j].begin(), nw[j].end());
      EXPECT_EQ(a, b) << out;
    }
    EXPECT_EQ(changed, 1) << out;
  }
}

TEST(Augment, WordRepeatDuplicatesOneWord) {
  glyph::Rng rng(6);
  const std::string out = glyph::augment_text("Kim", kWordRepeat, rng);
  EXPECT_EQ(out, "Kim Kim");
  for (int i = 0; i < 200; ++i) {
    const std::string o = glyph::augment_text("Happy Graduation", kWordRepeat, rng);
    const auto w = glyph::split_words(o);
    ASSERT_EQ(w.size(), 3u);
    auto ms = word_multiset(o);
    EXPECT_TRUE(ms.count("Happy") == 2 || ms.count("Graduation") == 2) << o;
  }
}

TEST(Augment, WordDropRemovesOneWord) {
  glyph::Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const std::string out = glyph::augment_text("Happy Graduation Kim", kWordDrop, rng);
    const auto w = glyph::split_words(out);
    ASSERT_EQ(w.size(), 2u);
    auto orig = word_multiset("Happy Graduation Kim");
    for (const auto& x : w) {
      auto it = orig.find(x);
      ASSERT_NE(it, orig.end()) << out;
      orig.erase(it);
    }
  }
}

TEST(Augment, WordAddInsertsOneNewWord) {
  glyph::Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    const std::string out = glyph::augment_text("Happy Graduation", kWordAdd, rng);
    const auto w = glyph::split_words(out);
    ASSERT_EQ(w.size(), 3u);
    int novel = 0;
    for (const auto& x : w)
      if (x != "Happy" && x != "Graduation") {
        ++novel;
        EXPECT_GE(x.size(), 2u);
        EXPECT_LE(x.size(), 6u);
        for (char c : x) EXPECT_TRUE(c >= 'a' && c <= 'z');
      }
    EXPECT_EQ(novel, 1) << out;
  }
}

TEST(Augment, ApplicabilityForSingleCharacterText) {
  // "A" admits only character replace/repeat/add.
  EXPECT_TRUE(glyph::strategy_applicable("A", kCharReplace));
  EXPECT_TRUE(glyph::strategy_applicable("A", kCharRepeat));
  EXPECT_FALSE(glyph::strategy_applicable("A", kCharDrop));
  EXPECT_TRUE(glyph::strategy_applicable("A", kCharAdd));
  EXPECT_FALSE(glyph::strategy_applicable("A", kWordReplace));
  EXPECT_FALSE(glyph::strategy_applicable("A", kWordRepeat));
  EXPECT_FALSE(glyph::strategy_applicable("A", kWordDrop));
  EXPECT_FALSE(glyph::strategy_applicable("A", kWordAdd));
  EXPECT_EQ(glyph::applicable_strategies("A").size(), 3u);
}

TEST(Augment, ApplicabilityEdgeCases) {
  // Single multi-char word: everything except word-drop, and word-replace
  // only when the spelling can actually change.
  EXPECT_TRUE(glyph::strategy_applicable("Kim", kWordReplace));
  EXPECT_FALSE(glyph::strategy_applicable("Kim", kWordDrop));
  EXPECT_TRUE(glyph::strategy_applicable("Kim", kWordRepeat));
  EXPECT_TRUE(glyph::strategy_applicable("Kim", kWordAdd));
  // All-equal characters cannot be shuffled into a new spelling.
  EXPECT_FALSE(glyph::strategy_applicable("aaa", kWordReplace));
  // Dropping a character from a 1-char word would empty it.
  EXPECT_FALSE(glyph::strategy_applicable("a a", kCharDrop));
  EXPECT_TRUE(glyph::strategy_applicable("a ab", kCharDrop));
  glyph::Rng rng(0);
  EXPECT_THROW(glyph::augment_text("A", kWordDrop, rng), glyph::Error);
}

TEST(Augment, InapplicableStrategyThrows) {
  glyph::Rng rng(0);
  try {
    glyph::augment_text("A", kWordRepeat, rng);
    FAIL() << "expected throw";
  } catch (const glyph::Error& e) {
    EXPECT_EQ(e.code(), glyph::ErrorCode::kInapplicable);
  }
}

TEST(Augment, StrategySamplingIsUniformOverApplicable) {
  // Chi-square goodness of fit over the 8 applicable strategies of a
  // multi-word text; 7 dof, 1% critical value 18.48.
  glyph::TextBox box;
  box.text = "Happy Graduation Kim";
  box.bbox = {0, 0, 4096, 4096};
  glyph::Rng rng(12345);
  ASSERT_EQ(glyph::applicable_strategies(box.text).size(), 8u);
  const int trials = 8000;
  const auto set = glyph::gen_hard_negatives(box, trials, rng);
  std::map<std::string, int> counts;
  for (const auto& [neg, strat] : set.negatives) counts[glyph::strategy_name(strat)]++;
  ASSERT_EQ(counts.size(), 8u);
  const double expected = trials / 8.0;
  double chi2 = 0.0;
  for (const auto& [name, c] : counts) chi2 += (c - expected) * (c - expected) / expected;
  EXPECT_LT(chi2, 18.48) << "chi2=" << chi2;
}

TEST(Augment, HardNegativesDifferFromAnchor) {
  glyph::TextBox box;
  box.text = "Happy";
  box.bbox = {0, 0, 4096, 4096};
  glyph::Rng rng(77);
  const auto set = glyph::gen_hard_negatives(box, 200, rng);
  ASSERT_EQ(set.negatives.size(), 200u);
  for (const auto& [neg, strat] : set.negatives) EXPECT_NE(neg.text, box.text);
}
