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

#include <cmath>
#include <vector>

#include "glyph/common.hpp"

namespace glyph {

using Vec = std::vector<double>;

struct Mat {
  int rows = 0;
  int cols = 0;
  Vec a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

  double& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

  static Mat random(int r, int c, Rng& rng, double stddev) {
    Mat m(r, c);
    for (auto& v : m.a) v = stddev * rng.normal();
    return m;
  }

  Vec apply(const Vec& x) const {
    if (static_cast<int>(x.size()) != cols) throw Error(ErrorCode::kDimMismatch, "matvec dims");
    Vec y(rows, 0.0);
    for (int r = 0; r < rows; ++r) {
      double s = 0.0;
      const double* row = &a[static_cast<size_t>(r) * cols];
      for (int c = 0; c < cols; ++c) s += row[c] * x[c];
      y[r] = s;
    }
    return y;
  }
};

inline double dot(const Vec& x, const Vec& y) {
  double s = 0.0;
  for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double norm2(const Vec& x) { return std::sqrt(dot(x, x)); }

inline Vec normalized(const Vec& x, double eps = 1e-12) {
  const double n = norm2(x);
  Vec y = x;
  const double inv = 1.0 / std::max(n, eps);
  for (auto& v : y) v *= inv;
  return y;
}

inline void axpy(double alpha, const Vec& x, Vec* y) {
  for (size_t i = 0; i < x.size(); ++i) (*y)[i] += alpha * x[i];
}

inline bool all_finite(const Vec& x) {
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace glyph
