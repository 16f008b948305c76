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

#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "glyph/decode.hpp"
#include "glyph/prompt.hpp"
#include "glyph/raster.hpp"

namespace glyph {

enum class SampleMode { kWord, kSentence, kParagraph };

inline const char* sample_mode_name(SampleMode m) {
  switch (m) {
    case SampleMode::kWord: return "word";
    case SampleMode::kSentence: return "sentence";
    case SampleMode::kParagraph: return "paragraph";
  }
  return "?";
}

// A block of text that cannot fit one line: more than 10 words or 100
// characters.
inline bool is_paragraph_text(const std::string& text) {
  return split_words(text).size() > 10 || text.size() > 100;
}

// Small public-domain fallback corpus for random text sampling.
inline std::vector<std::string> default_corpus() {
  return {"the",    "quick",  "brown",  "fox",     "jumps",   "over",   "lazy",    "dog",
          "Happy",  "Graduation", "Kim",  "places",  "you",     "will",   "go",      "today",
          "is",     "your",   "day",    "mountain", "waiting", "so",     "get",     "on",
          "way",    "oh",     "sun",    "moon",    "star",     "light",  "shadow",  "river",
          "stone",  "bright", "winter", "summer",  "autumn",   "spring", "morning", "night",
          "garden", "window", "letter", "number",  "design",   "poster", "card",    "title"};
}

struct SampleConfig {
  int max_boxes_word = 10;
  int max_boxes_sentence = 5;
  int max_boxes_paragraph = 3;
  int placement_attempts = 1000;
};

namespace detail {

inline std::string sample_text(const std::vector<std::string>& corpus, SampleMode mode, Rng& rng) {
  auto pick = [&] { return corpus[rng.next_below(corpus.size())]; };
  std::vector<std::string> words;
  switch (mode) {
    case SampleMode::kWord: {
      const int n = rng.uniform_int(1, 3);
      for (int i = 0; i < n; ++i) words.push_back(pick());
      break;
    }
    case SampleMode::kSentence: {
      const int target = rng.uniform_int(12, 50);
      while (static_cast<int>(join_words(words).size()) < target && words.size() < 10)
        words.push_back(pick());
      break;
    }
    case SampleMode::kParagraph: {
      while (join_words(words).size() <= 100) words.push_back(pick());
      break;
    }
  }
  return join_words(words);
}

}  // namespace detail

// Rejection-samples a document: random texts per mode, random font/color
// ids, non-overlapping boxes sized from the scale-1 wrap of their text.
inline GlyphDocument sample_document(const std::vector<std::string>& corpus,
                                     const FontCodebook& codebook, int canvas_w, int canvas_h,
                                     SampleMode mode, Rng& rng,
                                     const SampleConfig& cfg = SampleConfig()) {
  if (corpus.empty()) throw Error(ErrorCode::kPlacementFailure, "empty corpus");
  GlyphDocument doc;
  doc.width = canvas_w;
  doc.height = canvas_h;

  const int max_boxes = mode == SampleMode::kWord      ? cfg.max_boxes_word
                        : mode == SampleMode::kSentence ? cfg.max_boxes_sentence
                                                        : cfg.max_boxes_paragraph;
  const int target_boxes = rng.uniform_int(1, max_boxes);
  const int cw = 8, ch = 16;
  int attempts = 0;

  for (int bi = 0; bi < target_boxes; ++bi) {
    bool placed = false;
    while (attempts < cfg.placement_attempts && !placed) {
      ++attempts;
      const std::string text = detail::sample_text(corpus, mode, rng);
      const auto words = split_words(text);
      int longest = 0, cells = 0;
      for (const auto& w : words) longest = std::max(longest, static_cast<int>(w.size()));
      cells = static_cast<int>(text.size());
      const int min_w = longest * cw;
      if (min_w > canvas_w) continue;
      // Paragraph boxes stay narrower than their full text so the layout is
      // forced onto multiple lines.
      int max_w = canvas_w;
      if (mode == SampleMode::kParagraph) max_w = std::min(max_w, (cells - 1) * cw);
      if (max_w < min_w) continue;
      const int w = min_w + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(max_w - min_w + 1)));

      TextBox box;
      box.text = text;
      box.bbox = {0, 0, w, canvas_h};
      box.font_id = static_cast<int>(rng.next_below(codebook.num_fonts()));
      box.color_id = static_cast<int>(rng.next_below(codebook.num_colors()));
      box.align = rng.uniform_int(0, 1) ? Align::kCenter : Align::kLeft;

      std::vector<std::string> lines;
      if (!detail::wrap_at_scale(words, box.bbox, cw, ch, 1, &lines)) continue;
      const int k = static_cast<int>(lines.size());
      const int min_h = k * ch + (k - 1) * line_spacing_px(ch, 1);
      if (min_h > canvas_h) continue;
      const int slack_h = std::min(32, canvas_h - min_h);
      const int h = min_h + rng.uniform_int(0, slack_h);
      box.bbox.h = h;
      if (canvas_w - w < 0 || canvas_h - h < 0) continue;
      box.bbox.x = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(canvas_w - w + 1)));
      box.bbox.y = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(canvas_h - h + 1)));

      bool overlap = false;
      for (const auto& other : doc.boxes)
        if (box.bbox.overlaps(other.bbox)) { overlap = true; break; }
      if (overlap) continue;
      doc.boxes.push_back(std::move(box));
      placed = true;
    }
    if (!placed) break;
  }
  if (doc.boxes.empty())
    throw Error(ErrorCode::kPlacementFailure,
                "no box placed after " + std::to_string(cfg.placement_attempts) + " attempts");
  return doc;
}

struct DatasetRecord {
  long long id = 0;
  GlyphDocument doc;
  std::string image_path;
  std::string prompt;
  SampleMode split = SampleMode::kWord;
};

struct GenerateConfig {
  long long count = 0;
  std::uint64_t seed = 0;
  std::string out_dir;
  int canvas_w = 256;
  int canvas_h = 256;
  // Mode mix, normalized internally.
  double word_weight = 1.0;
  double sentence_weight = 1.0;
  double paragraph_weight = 1.0;
  int workers = 1;
  bool write_images = true;
  int max_boxes = 0;  // > 0 caps boxes per document in every mode
  std::vector<std::string> corpus;  // default_corpus() when empty
};

inline nlohmann::ordered_json record_to_json(const DatasetRecord& rec) {
  nlohmann::ordered_json j;
  j["id"] = rec.id;
  j["width"] = rec.doc.width;
  j["height"] = rec.doc.height;
  j["image"] = rec.image_path;
  j["background"] = {rec.doc.background.r, rec.doc.background.g, rec.doc.background.b};
  auto& boxes = j["boxes"] = nlohmann::ordered_json::array();
  for (const auto& b : rec.doc.boxes) {
    nlohmann::ordered_json bj;
    bj["bbox"] = {b.bbox.x, b.bbox.y, b.bbox.w, b.bbox.h};
    bj["text"] = b.text;
    bj["font_id"] = b.font_id;
    bj["color_id"] = b.color_id;
    bj["align"] = b.align == Align::kCenter ? "center" : "left";
    boxes.push_back(std::move(bj));
  }
  j["prompt"] = rec.prompt;
  j["split"] = sample_mode_name(rec.split);
  return j;
}

inline DatasetRecord record_from_json(const nlohmann::json& j) {
  DatasetRecord rec;
  rec.id = j.at("id").get<long long>();
  rec.doc.width = j.at("width").get<int>();
  rec.doc.height = j.at("height").get<int>();
  rec.doc.background = {j.at("background").at(0).get<std::uint8_t>(),
                        j.at("background").at(1).get<std::uint8_t>(),
                        j.at("background").at(2).get<std::uint8_t>()};
  for (const auto& bj : j.at("boxes")) {
    TextBox b;
    b.bbox = {bj.at("bbox").at(0).get<int>(), bj.at("bbox").at(1).get<int>(),
              bj.at("bbox").at(2).get<int>(), bj.at("bbox").at(3).get<int>()};
    b.text = bj.at("text").get<std::string>();
    b.font_id = bj.at("font_id").get<int>();
    b.color_id = bj.at("color_id").get<int>();
    b.align = bj.at("align").get<std::string>() == "center" ? Align::kCenter : Align::kLeft;
    rec.doc.boxes.push_back(std::move(b));
  }
  rec.image_path = j.at("image").get<std::string>();
  rec.prompt = j.at("prompt").get<std::string>();
  const std::string split = j.at("split").get<std::string>();
  rec.split = split == "word"     ? SampleMode::kWord
              : split == "sentence" ? SampleMode::kSentence
                                    : SampleMode::kParagraph;
  return rec;
}

// Builds record `id` of a run. Every record derives its own rng stream from
// (seed, id), so the output is independent of sharding and worker count.
inline DatasetRecord generate_record(const GenerateConfig& cfg, const FontCodebook& codebook,
                                     long long id) {
  Rng rng = Rng(cfg.seed).spawn(static_cast<std::uint64_t>(id) + 0x5265636full);
  const double total = cfg.word_weight + cfg.sentence_weight + cfg.paragraph_weight;
  const double u = rng.uniform01() * total;
  SampleMode mode = u < cfg.word_weight                        ? SampleMode::kWord
                    : u < cfg.word_weight + cfg.sentence_weight ? SampleMode::kSentence
                                                                : SampleMode::kParagraph;
  const auto& corpus = cfg.corpus.empty() ? default_corpus() : cfg.corpus;
  DatasetRecord rec;
  rec.id = id;
  rec.split = mode;
  SampleConfig sample_cfg;
  if (cfg.max_boxes > 0) {
    sample_cfg.max_boxes_word = std::min(sample_cfg.max_boxes_word, cfg.max_boxes);
    sample_cfg.max_boxes_sentence = std::min(sample_cfg.max_boxes_sentence, cfg.max_boxes);
    sample_cfg.max_boxes_paragraph = std::min(sample_cfg.max_boxes_paragraph, cfg.max_boxes);
  }
  rec.doc = sample_document(corpus, codebook, cfg.canvas_w, cfg.canvas_h, mode, rng, sample_cfg);
  rec.prompt = serialize_prompt(rec.doc);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "images/%08lld.ppm", id);
  rec.image_path = buf;
  return rec;
}

// Writes the JSONL manifest (and rasters) for `count` records. Workers pull
// record ids from a shared counter; manifest lines are stored per id and
// emitted in order, so output bytes do not depend on the worker count.
inline std::filesystem::path generate_dataset(const GenerateConfig& cfg,
                                              const FontCodebook& codebook) {
  namespace fs = std::filesystem;
  const fs::path out(cfg.out_dir);
  fs::create_directories(out);
  if (cfg.write_images) fs::create_directories(out / "images");

  std::vector<std::string> lines(static_cast<size_t>(cfg.count));
  std::atomic<long long> next{0};
  std::atomic<bool> failed{false};
  std::string first_error;
  std::mutex error_mu;

  auto work = [&] {
    while (true) {
      const long long id = next.fetch_add(1);
      if (id >= cfg.count || failed.load()) break;
      try {
        DatasetRecord rec = generate_record(cfg, codebook, id);
        if (cfg.write_images) {
          std::ofstream img_os(out / rec.image_path, std::ios::binary);
          if (!img_os) throw Error(ErrorCode::kIoError, "cannot open image for record " +
                                                            std::to_string(id));
          write_ppm(img_os, rasterize(rec.doc, codebook));
          if (!img_os) throw Error(ErrorCode::kIoError, "short write for record " +
                                                            std::to_string(id));
        }
        lines[static_cast<size_t>(id)] = record_to_json(rec).dump();
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!failed.exchange(true))
          first_error = "record " + std::to_string(id) + ": " + e.what();
      }
    }
  };

  const int workers = std::max(1, cfg.workers);
  std::vector<std::thread> threads;
  for (int i = 0; i < workers; ++i) threads.emplace_back(work);
  for (auto& t : threads) t.join();
  if (failed.load()) throw Error(ErrorCode::kIoError, first_error);

  const fs::path manifest = out / "manifest.jsonl";
  std::ofstream os(manifest, std::ios::binary);
  if (!os) throw Error(ErrorCode::kIoError, "cannot open " + manifest.string());
  for (const auto& line : lines) os << line << "\n";
  if (!os) throw Error(ErrorCode::kIoError, "short write to " + manifest.string());
  return manifest;
}

inline std::vector<DatasetRecord> load_manifest(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::kIoError, "cannot open " + path);
  std::vector<DatasetRecord> records;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    records.push_back(record_from_json(nlohmann::json::parse(line)));
  }
  return records;
}

}  // namespace glyph
