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
#include <cstdint>
#include <stdexcept>
#include <string>

namespace glyph {

enum class ErrorCode {
  kUnfittable,
  kUnknownCodebookId,
  kDecodeMismatch,
  kInapplicable,
  kPlacementFailure,
  kParseError,
  kBadDims,
  kEmptyIntersection,
  kNonFinite,
  kMissingGroup,
  kDimMismatch,
  kBadRange,
  kIoError,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::kUnfittable: return "UNFITTABLE";
    case ErrorCode::kUnknownCodebookId: return "UNKNOWN_CODEBOOK_ID";
    case ErrorCode::kDecodeMismatch: return "DECODE_MISMATCH";
    case ErrorCode::kInapplicable: return "INAPPLICABLE";
    case ErrorCode::kPlacementFailure: return "PLACEMENT_FAILURE";
    case ErrorCode::kParseError: return "PARSE_ERROR";
    case ErrorCode::kBadDims: return "BAD_DIMS";
    case ErrorCode::kEmptyIntersection: return "EMPTY_INTERSECTION";
    case ErrorCode::kNonFinite: return "NONFINITE";
    case ErrorCode::kMissingGroup: return "MISSING_GROUP";
    case ErrorCode::kDimMismatch: return "DIM_MISMATCH";
    case ErrorCode::kBadRange: return "BAD_RANGE";
    case ErrorCode::kIoError: return "IO_ERROR";
  }
  return "UNKNOWN";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + detail),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb& o) const { return r == o.r && g == o.g && b == o.b; }
  bool operator!=(const Rgb& o) const { return !(*this == o); }
};

struct Rect {
  int x = 0, y = 0, w = 0, h = 0;
  int right() const { return x + w; }
  int bottom() const { return y + h; }
  long long area() const { return static_cast<long long>(w) * h; }
  bool contains(int px, int py) const {
    return px >= x && px < right() && py >= y && py < bottom();
  }
  bool overlaps(const Rect& o) const {
    return x < o.right() && o.x < right() && y < o.bottom() && o.y < bottom();
  }
};

// Deterministic RNG. Uses an explicit xoshiro-style core plus hand-rolled
// bounded/normal draws so that streams are reproducible across standard
// libraries and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(splitmix(seed)) {
    // A second scramble avoids short-seed correlation between streams.
    state_ = splitmix(state_ + 0x9e3779b97f4a7c15ull);
  }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform integer in [0, n). n must be >= 1.
  std::uint64_t next_below(std::uint64_t n) {
    // Rejection sampling kills modulo bias.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return v % n;
  }

  int uniform_int(int lo, int hi) {  // inclusive range
    return lo + static_cast<int>(next_below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double normal() {
    // Box-Muller; the spare is cached.
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform01(), u2 = uniform01();
    while (u1 <= 1e-300) u1 = uniform01();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * 3.14159265358979323846 * u2;
    spare_ = mag * std::sin(ang);
    has_spare_ = true;
    return mag * std::cos(ang);
  }

  // Derives an independent child stream, e.g. one per dataset shard.
  Rng spawn(std::uint64_t key) const {
    return Rng(splitmix(state_ ^ splitmix(key ^ 0xd1b54a32d192ed03ull)));
  }

 private:
  static std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace glyph
