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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "glyph/glyph.hpp"

namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "glyphforge 1.0.0";

void echo_config(CLI::App& app, const std::string& out_dir) {
  const std::string resolved = app.config_to_str(true, false);
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    std::ofstream os(fs::path(out_dir) / "run_config.toml");
    os << resolved;
  } else {
    std::cerr << resolved;
  }
}

std::vector<std::string> load_corpus(const std::string& path) {
  if (path.empty()) return {};
  std::ifstream is(path);
  if (!is) throw glyph::Error(glyph::ErrorCode::kIoError, "cannot open corpus " + path);
  std::vector<std::string> words;
  std::string w;
  while (is >> w) words.push_back(w);
  if (words.empty()) throw glyph::Error(glyph::ErrorCode::kIoError, "corpus is empty: " + path);
  return words;
}

std::vector<glyph::Rect> parse_boxes_arg(const std::string& arg) {
  std::vector<glyph::Rect> boxes;
  std::stringstream ss(arg);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.empty()) continue;
    glyph::Rect r;
    if (std::sscanf(item.c_str(), "%d,%d,%d,%d", &r.x, &r.y, &r.w, &r.h) != 4)
      throw glyph::Error(glyph::ErrorCode::kParseError, "bad box spec: " + item);
    boxes.push_back(r);
  }
  return boxes;
}

int run_gen_dataset(const glyph::GenerateConfig& cfg) {
  const auto codebook = glyph::FontCodebook::build(cfg.seed);
  const auto manifest = glyph::generate_dataset(cfg, codebook);
  {
    std::ofstream os(fs::path(cfg.out_dir) / "codebook.json");
    os << codebook.to_json().dump(2) << "\n";
  }
  std::cout << manifest.string() << "\n";
  return 0;
}

int run_augment(const std::string& text, std::uint64_t seed, int count) {
  glyph::Rng rng(seed);
  glyph::TextBox box;
  box.text = text;
  box.bbox = {0, 0, 4096, 4096};
  const auto set = glyph::gen_hard_negatives(box, count, rng);
  for (const auto& [neg, strat] : set.negatives) {
    nlohmann::ordered_json j;
    j["strategy"] = glyph::strategy_name(strat);
    j["text"] = neg.text;
    std::cout << j.dump() << "\n";
  }
  return 0;
}

int run_train_align(const std::string& manifest_path, int synthetic_count, glyph::AlignHyper hyper,
                    const std::string& out_dir, int holdout) {
  glyph::FontCodebook codebook;
  std::vector<glyph::DatasetRecord> records;
  if (!manifest_path.empty()) {
    const fs::path cb_path = fs::path(manifest_path).parent_path() / "codebook.json";
    std::ifstream is(cb_path);
    if (!is)
      throw glyph::Error(glyph::ErrorCode::kIoError, "cannot open " + cb_path.string());
    codebook = glyph::FontCodebook::from_json(nlohmann::json::parse(is));
    records = glyph::load_manifest(manifest_path);
  } else {
    // The synthetic demo uses a single font and color: the toy towers are
    // linear, so style variation would put the task out of reach.
    codebook = glyph::FontCodebook::build(hyper.seed, 1, 1);
    records = glyph::alignment_demo_records(synthetic_count + holdout, codebook, hyper.seed);
  }
  std::vector<glyph::DatasetRecord> train(records.begin(), records.end() - std::min<size_t>(holdout, records.size()));
  std::vector<glyph::DatasetRecord> held(records.end() - std::min<size_t>(holdout, records.size()), records.end());

  auto result = glyph::train_align(train, codebook, hyper);
  if (result.diverged) {
    std::cerr << "training diverged: loss became non-finite\n";
    return 1;
  }

  double held_retrieval = -1.0;
  if (!held.empty()) {
    glyph::Rng aug_rng(hyper.seed + 17);
    const auto held_images =
        glyph::prepare_images(held, codebook, result.params, 0, aug_rng);
    held_retrieval = glyph::retrieval_at_1(result.params, held_images);
  }

  fs::create_directories(out_dir);
  {
    std::ofstream os(fs::path(out_dir) / "checkpoint.json");
    os << result.params.to_json().dump() << "\n";
  }
  {
    std::ofstream os(fs::path(out_dir) / "history.csv");
    glyph::write_history_csv(os, result.history);
  }
  nlohmann::ordered_json j;
  j["steps"] = static_cast<int>(result.history.size());
  j["final_loss_box"] = result.history.empty() ? 0.0 : result.history.back().loss_box;
  j["final_loss_hard"] = result.history.empty() ? 0.0 : result.history.back().loss_hard;
  j["train_retrieval_at_1"] = result.history.empty() ? 0.0 : result.history.back().retrieval_at_1;
  j["holdout_retrieval_at_1"] = held_retrieval;
  std::cout << j.dump(2) << "\n";
  return 0;
}

int run_mask_dump(int grid_w, int grid_h, const std::string& boxes_arg, int global_tokens,
                  int tokens_per_box, const std::string& out_dir) {
  const auto boxes = parse_boxes_arg(boxes_arg);
  const auto pa = glyph::assign_pixels(grid_w, grid_h, boxes);
  glyph::TokenGrouping tg;
  for (int t = 0; t < global_tokens; ++t) tg.group.push_back(0);
  for (size_t k = 0; k < boxes.size(); ++k)
    for (int t = 0; t < tokens_per_box; ++t) tg.group.push_back(static_cast<int>(k) + 1);
  const auto mask = glyph::build_attention_mask(pa, tg);

  fs::create_directories(out_dir);
  {
    std::ofstream os(fs::path(out_dir) / "mask.pbm", std::ios::binary);
    glyph::write_mask_pbm(os, mask);
  }
  bool rows_ok = true;
  for (int p = 0; p < mask.pixels && rows_ok; ++p) {
    bool any = false;
    for (int t = 0; t < mask.tokens; ++t) any = any || mask.at(p, t);
    rows_ok = any;
  }
  nlohmann::ordered_json j;
  j["P"] = mask.pixels;
  j["T"] = mask.tokens;
  j["groups"] = static_cast<int>(boxes.size()) + 1;
  j["rows_ok"] = rows_ok;
  std::cout << j.dump() << "\n";
  std::ofstream os(fs::path(out_dir) / "mask.json");
  os << j.dump() << "\n";
  return 0;
}

int run_sdedit_demo(int t0, int t1, int t_max, std::uint64_t seed, double lambda,
                    const std::string& out_dir) {
  const auto sched = glyph::make_schedule(t0, t1, t_max);
  auto setup = glyph::make_toy_edit_setup(64, 64);
  glyph::ToyDenoiser model{setup.target, lambda, t_max};
  glyph::Rng rng(seed);
  glyph::SDEditTrace trace;
  const auto result = glyph::region_sdedit(setup.original, setup.boxes, sched, model, rng, &trace);

  fs::create_directories(out_dir);
  auto dump = [&](const char* name, const glyph::FloatImage& img) {
    std::ofstream os(fs::path(out_dir) / name, std::ios::binary);
    glyph::write_ppm(os, img.to_raster());
  };
  dump("original.ppm", setup.original);
  dump("target.ppm", setup.target);
  dump("result.ppm", result);
  {
    std::ofstream os(fs::path(out_dir) / "trace.csv");
    os << "t,rmse_in_vs_target,rmse_out_vs_original\n";
    for (size_t i = 0; i < trace.step.size(); ++i)
      os << trace.step[i] << "," << trace.rmse_inside[i] << "," << trace.rmse_outside[i] << "\n";
  }
  const auto mask = glyph::region_mask(64, 64, setup.boxes);
  nlohmann::ordered_json j;
  j["rmse_in_vs_target"] = glyph::rmse(result, setup.target, mask, true);
  j["rmse_out_vs_original"] = glyph::rmse(result, setup.original, mask, false);
  std::cout << j.dump(2) << "\n";
  return 0;
}

int run_eval(const std::string& pairs_path, bool case_sensitive) {
  std::ifstream is(pairs_path);
  if (!is) throw glyph::Error(glyph::ErrorCode::kIoError, "cannot open " + pairs_path);
  std::vector<glyph::EvalPair> pairs;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    pairs.push_back(glyph::eval_pair_from_json(nlohmann::json::parse(line)));
  }
  std::cout << glyph::bucketed_report(pairs, case_sensitive).dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic glyph-text dataset, alignment and evaluation toolkit"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "TOML config file; flags override it");
  app.require_subcommand(0, 1);

  // gen-dataset
  glyph::GenerateConfig gen;
  auto* cmd_gen = app.add_subcommand("gen-dataset", "Generate a glyph-text dataset");
  std::string corpus_path;
  cmd_gen->add_option("--count", gen.count, "Number of records")->required();
  cmd_gen->add_option("--seed", gen.seed, "Master seed")->default_val(0);
  cmd_gen->add_option("--out", gen.out_dir, "Output directory")->required();
  cmd_gen->add_option("--canvas-w", gen.canvas_w)->default_val(256);
  cmd_gen->add_option("--canvas-h", gen.canvas_h)->default_val(256);
  cmd_gen->add_option("--workers", gen.workers)->default_val(1);
  cmd_gen->add_option("--word-weight", gen.word_weight)->default_val(1.0);
  cmd_gen->add_option("--sentence-weight", gen.sentence_weight)->default_val(1.0);
  cmd_gen->add_option("--paragraph-weight", gen.paragraph_weight)->default_val(1.0);
  cmd_gen->add_option("--max-boxes", gen.max_boxes, "Cap boxes per document (0 = mode default)")
      ->default_val(0);
  cmd_gen->add_option("--corpus", corpus_path, "Word list file (whitespace separated)");
  bool no_images = false;
  cmd_gen->add_flag("--no-images", no_images, "Write the manifest only");

  // augment
  auto* cmd_aug = app.add_subcommand("augment", "Preview hard-negative mutations of a text");
  std::string aug_text;
  std::uint64_t aug_seed = 0;
  int aug_count = 8;
  cmd_aug->add_option("--text", aug_text)->required();
  cmd_aug->add_option("--seed", aug_seed)->default_val(0);
  cmd_aug->add_option("--count", aug_count, "Number of negatives (G)")->default_val(8);

  // train-align
  auto* cmd_train = app.add_subcommand("train-align", "Train the toy glyph-alignment towers");
  glyph::AlignHyper hyper;
  std::string manifest_path, train_out = "train_out";
  int synthetic_count = 256, holdout = 64;
  cmd_train->add_option("--manifest", manifest_path, "Dataset manifest (JSONL)");
  cmd_train->add_option("--synthetic", synthetic_count, "Generate this many training pairs")
      ->default_val(256);
  cmd_train->add_option("--holdout", holdout)->default_val(64);
  cmd_train->add_option("--steps", hyper.steps)->default_val(2000);
  cmd_train->add_option("--lr", hyper.lr)->default_val(0.3);
  cmd_train->add_option("--temp-lr-scale", hyper.temp_lr_scale)->default_val(0.1);
  cmd_train->add_option("--batch", hyper.batch)->default_val(64);
  cmd_train->add_option("--G", hyper.hard_negatives, "Hard negatives per box")->default_val(0);
  cmd_train->add_option("--S", hyper.roi_out)->default_val(3);
  cmd_train->add_option("--D", hyper.dim)->default_val(32);
  cmd_train->add_option("--seed", hyper.seed)->default_val(0);
  cmd_train->add_flag("--renorm-after-roi", hyper.renorm_after_roi);
  cmd_train->add_flag("--literal-hard-denominator", hyper.literal_hard_denominator);
  cmd_train->add_option("--out", train_out)->default_val("train_out");

  // mask-dump
  auto* cmd_mask = app.add_subcommand("mask-dump", "Emit the region attention mask as PBM + JSON");
  int grid_w = 16, grid_h = 16, global_tokens = 4, tokens_per_box = 4;
  std::string boxes_arg, mask_out = "mask_out";
  cmd_mask->add_option("--grid-w", grid_w)->default_val(16);
  cmd_mask->add_option("--grid-h", grid_h)->default_val(16);
  cmd_mask->add_option("--boxes", boxes_arg, "Semicolon list of x,y,w,h")->required();
  cmd_mask->add_option("--global-tokens", global_tokens)->default_val(4);
  cmd_mask->add_option("--tokens-per-box", tokens_per_box)->default_val(4);
  cmd_mask->add_option("--out", mask_out)->default_val("mask_out");

  // sdedit-demo
  auto* cmd_sd = app.add_subcommand("sdedit-demo", "Run the region-wise editing schedule");
  int t0 = 800, t1 = 300, t_max = 1000;
  std::uint64_t sd_seed = 0;
  double lambda = 0.05;
  std::string sd_out = "sdedit_out";
  cmd_sd->add_option("--t0", t0)->default_val(800);
  cmd_sd->add_option("--t1", t1)->default_val(300);
  cmd_sd->add_option("--steps", t_max, "Total timesteps T_max")->default_val(1000);
  cmd_sd->add_option("--seed", sd_seed)->default_val(0);
  cmd_sd->add_option("--lambda", lambda)->default_val(0.05);
  cmd_sd->add_option("--out", sd_out)->default_val("sdedit_out");

  // eval
  auto* cmd_eval = app.add_subcommand("eval", "Score OCR predictions against ground truth");
  std::string pairs_path;
  bool case_sensitive = false;
  cmd_eval->add_option("--pairs", pairs_path, "JSONL of {id, pred, gt, prompt_chars}")->required();
  cmd_eval->add_flag("--case-sensitive", case_sensitive);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return 2;
  }

  try {
    if (*cmd_gen) {
      gen.write_images = !no_images;
      gen.corpus = load_corpus(corpus_path);
      echo_config(app, gen.out_dir);
      return run_gen_dataset(gen);
    }
    if (*cmd_aug) {
      echo_config(app, "");
      return run_augment(aug_text, aug_seed, aug_count);
    }
    if (*cmd_train) {
      echo_config(app, train_out);
      return run_train_align(manifest_path, synthetic_count, hyper, train_out, holdout);
    }
    if (*cmd_mask) {
      echo_config(app, mask_out);
      return run_mask_dump(grid_w, grid_h, boxes_arg, global_tokens, tokens_per_box, mask_out);
    }
    if (*cmd_sd) {
      echo_config(app, sd_out);
      return run_sdedit_demo(t0, t1, t_max, sd_seed, lambda, sd_out);
    }
    if (*cmd_eval) {
      return run_eval(pairs_path, case_sensitive);
    }
    std::cerr << app.help();
    return 2;
  } catch (const glyph::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
