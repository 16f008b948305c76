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
#include <array>
#include <string>
#include <vector>

#include "glyph/document.hpp"

namespace glyph {

enum class AugmentLevel { kCharacter, kWord };
enum class AugmentKind { kReplace, kRepeat, kDrop, kAdd };

// One of the eight (level, kind) mutation strategies used to manufacture
// hard negatives.
struct AugmentStrategy {
  AugmentLevel level;
  AugmentKind kind;
  bool operator==(const AugmentStrategy& o) const { return level == o.level && kind == o.kind; }
};

inline constexpr std::array<AugmentStrategy, 8> kAllStrategies = {{
    {AugmentLevel::kCharacter, AugmentKind::kReplace},
    {AugmentLevel::kCharacter, AugmentKind::kRepeat},
    {AugmentLevel::kCharacter, AugmentKind::kDrop},
    {AugmentLevel::kCharacter, AugmentKind::kAdd},
    {AugmentLevel::kWord, AugmentKind::kReplace},
    {AugmentLevel::kWord, AugmentKind::kRepeat},
    {AugmentLevel::kWord, AugmentKind::kDrop},
    {AugmentLevel::kWord, AugmentKind::kAdd},
}};

inline const char* strategy_name(AugmentStrategy s) {
  const bool ch = s.level == AugmentLevel::kCharacter;
  switch (s.kind) {
    case AugmentKind::kReplace: return ch ? "char-replace" : "word-replace";
    case AugmentKind::kRepeat: return ch ? "char-repeat" : "word-repeat";
    case AugmentKind::kDrop: return ch ? "char-drop" : "word-drop";
    case AugmentKind::kAdd: return ch ? "char-add" : "word-add";
  }
  return "?";
}

namespace detail {

// Replacement and inserted characters come from the printable set minus
// space, so word structure is never disturbed by character-level ops.
inline char random_visible_char(Rng& rng) {
  return static_cast<char>(kFirstPrintable + 1 + rng.uniform_int(0, kNumPrintable - 2));
}

inline bool has_multichar_word(const std::vector<std::string>& words) {
  for (const auto& w : words)
    if (w.size() >= 2) return true;
  return false;
}

inline bool has_shuffleable_word(const std::vector<std::string>& words) {
  for (const auto& w : words) {
    if (w.size() < 2) continue;
    for (size_t i = 1; i < w.size(); ++i)
      if (w[i] != w[0]) return true;
  }
  return false;
}

}  // namespace detail

// Whether a strategy can produce a differing, non-empty, well-formed text.
inline bool strategy_applicable(const std::string& text, AugmentStrategy s) {
  const auto words = split_words(text);
  if (words.empty()) return false;
  if (s.level == AugmentLevel::kCharacter) {
    switch (s.kind) {
      case AugmentKind::kReplace:
      case AugmentKind::kRepeat:
      case AugmentKind::kAdd:
        return true;
      case AugmentKind::kDrop:
        return detail::has_multichar_word(words);  // dropping must not empty a word
    }
  }
  // Word-level ops act on whole words; single-character texts stay with the
  // character-level strategies.
  const size_t total_chars = join_words(words).size();
  if (total_chars < 2) return false;
  switch (s.kind) {
    case AugmentKind::kReplace: return detail::has_shuffleable_word(words);
    case AugmentKind::kRepeat: return true;
    case AugmentKind::kDrop: return words.size() >= 2;
    case AugmentKind::kAdd: return true;
  }
  return false;
}

// Applies one mutation. Character ops touch exactly one position; word ops
// touch exactly one word. Deterministic under a fixed rng state.
inline std::string augment_text(const std::string& text, AugmentStrategy s, Rng& rng) {
  auto words = split_words(text);
  if (words.empty()) throw Error(ErrorCode::kInapplicable, "empty text");
  if (!strategy_applicable(text, s))
    throw Error(ErrorCode::kInapplicable, std::string(strategy_name(s)) + " on \"" + text + "\"");

  if (s.level == AugmentLevel::kCharacter) {
    // Pick a word, then a position inside it.
    switch (s.kind) {
      case AugmentKind::kReplace: {
        int wi = rng.uniform_int(0, static_cast<int>(words.size()) - 1);
        std::string& w = words[wi];
        const int pos = rng.uniform_int(0, static_cast<int>(w.size()) - 1);
        char c = detail::random_visible_char(rng);
        while (c == w[pos]) c = detail::random_visible_char(rng);
        w[pos] = c;
        break;
      }
      case AugmentKind::kRepeat: {
        int wi = rng.uniform_int(0, static_cast<int>(words.size()) - 1);
        std::string& w = words[wi];
        const int pos = rng.uniform_int(0, static_cast<int>(w.size()) - 1);
        const int extra = rng.uniform_int(2, 4);
        w.insert(static_cast<size_t>(pos), std::string(static_cast<size_t>(extra), w[pos]));
        break;
      }
      case AugmentKind::kDrop: {
        std::vector<int> eligible;
        for (size_t i = 0; i < words.size(); ++i)
          if (words[i].size() >= 2) eligible.push_back(static_cast<int>(i));
        std::string& w = words[eligible[rng.uniform_int(0, static_cast<int>(eligible.size()) - 1)]];
        w.erase(static_cast<size_t>(rng.uniform_int(0, static_cast<int>(w.size()) - 1)), 1);
        break;
      }
      case AugmentKind::kAdd: {
        int wi = rng.uniform_int(0, static_cast<int>(words.size()) - 1);
        std::string& w = words[wi];
        const int pos = rng.uniform_int(0, static_cast<int>(w.size()));
        w.insert(static_cast<size_t>(pos), 1, detail::random_visible_char(rng));
        break;
      }
    }
    return join_words(words);
  }

  switch (s.kind) {
    case AugmentKind::kReplace: {
      // Shuffle the characters of one word until the spelling changes.
      std::vector<int> eligible;
      for (size_t i = 0; i < words.size(); ++i) {
        const auto& w = words[i];
        if (w.size() >= 2 && w.find_first_not_of(w[0]) != std::string::npos)
          eligible.push_back(static_cast<int>(i));
      }
      std::string& w = words[eligible[rng.uniform_int(0, static_cast<int>(eligible.size()) - 1)]];
      const std::string original = w;
      do {
        for (int i = static_cast<int>(w.size()) - 1; i > 0; --i)
          std::swap(w[i], w[rng.uniform_int(0, i)]);
      } while (w == original);
      break;
    }
    case AugmentKind::kRepeat: {
      const int wi = rng.uniform_int(0, static_cast<int>(words.size()) - 1);
      words.insert(words.begin() + wi, words[wi]);
      break;
    }
    case AugmentKind::kDrop: {
      words.erase(words.begin() + rng.uniform_int(0, static_cast<int>(words.size()) - 1));
      break;
    }
    case AugmentKind::kAdd: {
      const int len = rng.uniform_int(2, 6);
      std::string w;
      for (int i = 0; i < len; ++i)
        w.push_back(static_cast<char>('a' + rng.uniform_int(0, 25)));
      words.insert(words.begin() + rng.uniform_int(0, static_cast<int>(words.size())), w);
      break;
    }
  }
  return join_words(words);
}

// The negative set G mined for one anchor box.
struct HardNegativeSet {
  TextBox anchor;
  std::vector<std::pair<TextBox, AugmentStrategy>> negatives;
};

inline std::vector<AugmentStrategy> applicable_strategies(const std::string& text) {
  std::vector<AugmentStrategy> out;
  for (auto s : kAllStrategies)
    if (strategy_applicable(text, s)) out.push_back(s);
  return out;
}

// Strategies are sampled uniformly over the applicable subset; the mutated
// text is re-rendered by the caller, so image and text stay consistent by
// construction.
inline HardNegativeSet gen_hard_negatives(const TextBox& box, int count, Rng& rng) {
  if (count < 1) throw Error(ErrorCode::kInapplicable, "G must be >= 1");
  const auto strategies = applicable_strategies(box.text);
  if (strategies.empty())
    throw Error(ErrorCode::kInapplicable, "no strategy applies to \"" + box.text + "\"");
  HardNegativeSet set;
  set.anchor = box;
  for (int g = 0; g < count; ++g) {
    const auto strat = strategies[rng.next_below(strategies.size())];
    std::string mutated = augment_text(box.text, strat, rng);
    for (int attempt = 0; mutated == box.text && attempt < 64; ++attempt)
      mutated = augment_text(box.text, strat, rng);
    TextBox neg = box;
    neg.text = mutated;
    set.negatives.emplace_back(std::move(neg), strat);
  }
  return set;
}

}  // namespace glyph
