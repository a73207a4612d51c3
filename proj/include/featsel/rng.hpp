// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FEATSEL_RNG_HPP_
#define FEATSEL_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace featsel {

// Seedable generator whose draws are identical on every platform.
//
// std::mt19937_64 output is fixed by the standard, but the std::*_distribution
// adaptors are not, so every derived draw is implemented here.
class Rng {
 public:
  static constexpr std::string_view kName = "mt19937_64";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, n) by rejection; n must be positive.
  std::uint64_t uniform_index(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return r % n;
    }
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal (Marsaglia polar method).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * scale;
    has_spare_ = true;
    return u * scale;
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// `count` distinct elements of `pool` (partial Fisher-Yates). Clamped to the
// pool size.
template <typename T>
std::vector<T> sample_without_replacement(std::span<const T> pool,
                                          std::size_t count, Rng& rng) {
  std::vector<T> items(pool.begin(), pool.end());
  if (count > items.size()) count = items.size();
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + rng.uniform_index(items.size() - i);
    std::swap(items[i], items[j]);
  }
  items.resize(count);
  return items;
}

}  // namespace featsel

#endif  // FEATSEL_RNG_HPP_
