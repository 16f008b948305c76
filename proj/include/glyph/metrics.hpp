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
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "glyph/common.hpp"

namespace glyph {

// One scored image: predicted words (OCR output) against ground truth.
struct EvalPair {
  std::string image_id;
  std::vector<std::string> pred;
  std::vector<std::string> gt;
  int prompt_chars = 0;
};

inline std::string lowercased(const std::string& s) {
  std::string out = s;
  for (auto& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

inline std::vector<std::string> lowercased(const std::vector<std::string>& words) {
  std::vector<std::string> out;
  out.reserve(words.size());
  for (const auto& w : words) out.push_back(lowercased(w));
  return out;
}

// Character-level Levenshtein distance, unit costs.
inline int levenshtein(const std::string& a, const std::string& b) {
  const int n = static_cast<int>(a.size()), m = static_cast<int>(b.size());
  std::vector<int> prev(m + 1), cur(m + 1);
  for (int j = 0; j <= m; ++j) prev[j] = j;
  for (int i = 1; i <= n; ++i) {
    cur[0] = i;
    for (int j = 1; j <= m; ++j) {
      const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

namespace detail {

// Matched word count under multiset semantics: each predicted word consumes
// at most one equal ground-truth word.
inline int multiset_matches(const std::vector<std::string>& pred,
                            const std::vector<std::string>& gt) {
  std::map<std::string, int> counts;
  for (const auto& w : gt) ++counts[w];
  int matched = 0;
  for (const auto& w : pred) {
    auto it = counts.find(w);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++matched;
    }
  }
  return matched;
}

// Exact Hungarian algorithm (potentials form) on a square cost matrix.
inline double hungarian_min_cost(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  if (n == 0) return 0.0;
  const double kInf = 1e18;
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  double total = 0.0;
  for (int j = 1; j <= n; ++j) total += cost[p[j] - 1][j - 1];
  return total;
}

}  // namespace detail

// Word-level precision under greedy multiset matching. Empty predictions
// score 0 unless the ground truth is also empty.
inline double word_precision(const EvalPair& pair, bool case_sensitive) {
  const auto pred = case_sensitive ? pair.pred : lowercased(pair.pred);
  const auto gt = case_sensitive ? pair.gt : lowercased(pair.gt);
  if (pred.empty()) return gt.empty() ? 1.0 : 0.0;
  return static_cast<double>(detail::multiset_matches(pred, gt)) / pred.size();
}

inline double word_recall(const EvalPair& pair, bool case_sensitive) {
  const auto pred = case_sensitive ? pair.pred : lowercased(pair.pred);
  const auto gt = case_sensitive ? pair.gt : lowercased(pair.gt);
  if (gt.empty()) return 1.0;
  return static_cast<double>(detail::multiset_matches(pred, gt)) / gt.size();
}

// Mean per-ground-truth-word edit distance under an optimal one-to-one
// assignment; unmatched words on either side cost their own length.
inline double mean_edit_distance(const EvalPair& pair) {
  const auto& pred = pair.pred;
  const auto& gt = pair.gt;
  if (gt.empty()) throw Error(ErrorCode::kDimMismatch, "ground truth must be non-empty");
  const int n = static_cast<int>(std::max(pred.size(), gt.size()));
  std::vector<std::vector<double>> cost(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const std::string& a = i < static_cast<int>(pred.size()) ? pred[i] : std::string();
      const std::string& b = j < static_cast<int>(gt.size()) ? gt[j] : std::string();
      cost[i][j] = levenshtein(a, b);
    }
  return detail::hungarian_min_cost(cost) / static_cast<double>(gt.size());
}

// Image counted correct iff every ground-truth word is matched.
inline double image_accuracy(const std::vector<EvalPair>& pairs, bool case_sensitive) {
  if (pairs.empty()) throw Error(ErrorCode::kDimMismatch, "no pairs to score");
  int correct = 0;
  for (const auto& p : pairs)
    if (word_recall(p, case_sensitive) == 1.0) ++correct;
  return static_cast<double>(correct) / pairs.size();
}

// Benchmark buckets over prompt character counts: [0,20) [20,50) [50,100)
// [100,inf), reported as 1..4.
inline int bucket_of(int prompt_chars) {
  if (prompt_chars < 20) return 1;
  if (prompt_chars < 50) return 2;
  if (prompt_chars < 100) return 3;
  return 4;
}

struct MetricsReport {
  double precision = 0.0;
  double recall = 0.0;
  double case_recall = 0.0;
  double f_measure = 0.0;
  double mean_edit_distance = 0.0;
  double image_accuracy = 0.0;
  long long pair_count = 0;
};

inline double f_measure(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

inline MetricsReport score_pairs(const std::vector<EvalPair>& pairs, bool case_sensitive) {
  MetricsReport rep;
  rep.pair_count = static_cast<long long>(pairs.size());
  if (pairs.empty()) return rep;
  double p_sum = 0, r_sum = 0, cr_sum = 0, ed_sum = 0;
  for (const auto& pair : pairs) {
    p_sum += word_precision(pair, case_sensitive);
    r_sum += word_recall(pair, case_sensitive);
    cr_sum += word_recall(pair, true);
    ed_sum += mean_edit_distance(pair);
  }
  rep.precision = p_sum / pairs.size();
  rep.recall = r_sum / pairs.size();
  rep.case_recall = cr_sum / pairs.size();
  rep.f_measure = f_measure(rep.precision, rep.recall);
  rep.mean_edit_distance = ed_sum / pairs.size();
  rep.image_accuracy = image_accuracy(pairs, case_sensitive);
  return rep;
}

inline nlohmann::ordered_json report_to_json(const MetricsReport& rep) {
  nlohmann::ordered_json j;
  j["pairs"] = rep.pair_count;
  j["precision"] = rep.precision;
  j["recall"] = rep.recall;
  j["case_recall"] = rep.case_recall;
  j["f_measure"] = rep.f_measure;
  j["mean_edit_distance"] = rep.mean_edit_distance;
  j["image_accuracy"] = rep.image_accuracy;
  return j;
}

// Overall report plus one entry per character-count bucket.
inline nlohmann::ordered_json bucketed_report(const std::vector<EvalPair>& pairs,
                                              bool case_sensitive) {
  nlohmann::ordered_json j;
  j["case_sensitive"] = case_sensitive;
  j["overall"] = report_to_json(score_pairs(pairs, case_sensitive));
  static const char* kBucketNames[] = {"chars_0_20", "chars_20_50", "chars_50_100", "chars_100_up"};
  auto& buckets = j["buckets"] = nlohmann::ordered_json::object();
  for (int b = 1; b <= 4; ++b) {
    std::vector<EvalPair> subset;
    for (const auto& p : pairs)
      if (bucket_of(p.prompt_chars) == b) subset.push_back(p);
    buckets[kBucketNames[b - 1]] = report_to_json(score_pairs(subset, case_sensitive));
  }
  return j;
}

inline EvalPair eval_pair_from_json(const nlohmann::json& j) {
  EvalPair p;
  p.image_id = j.contains("id") && j.at("id").is_string() ? j.at("id").get<std::string>()
                                                          : j.value("id", nlohmann::json(0)).dump();
  p.pred = j.at("pred").get<std::vector<std::string>>();
  p.gt = j.at("gt").get<std::vector<std::string>>();
  p.prompt_chars = j.value("prompt_chars", 0);
  return p;
}

}  // namespace glyph
