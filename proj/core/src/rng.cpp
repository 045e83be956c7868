// Copyright 2026 The qtomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qtomo/rng.hpp"

#include <algorithm>
#include <cmath>

namespace qtomo {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = splitmix64(seed);
  for (std::uint64_t p : path) h = splitmix64(h ^ splitmix64(p + 0x632be59bd9b4e019ULL));
  return h;
}

std::vector<std::int64_t> sample_multinomial(std::int64_t n, std::span<const double> p, Rng& rng) {
  std::vector<std::int64_t> out(p.size(), 0);
  if (p.empty()) return out;
  double remaining_mass = 0.0;
  for (double v : p) remaining_mass += std::max(v, 0.0);
  std::int64_t remaining = n;
  for (std::size_t i = 0; i + 1 < p.size() && remaining > 0; ++i) {
    const double pi = std::max(p[i], 0.0);
    if (remaining_mass <= 0.0) break;
    const double q = std::clamp(pi / remaining_mass, 0.0, 1.0);
    std::int64_t draw = 0;
    if (q >= 1.0) {
      draw = remaining;
    } else if (q > 0.0) {
      std::binomial_distribution<std::int64_t> binom(remaining, q);
      draw = binom(rng);
    }
    out[i] = draw;
    remaining -= draw;
    remaining_mass -= pi;
  }
  out.back() += remaining;
  return out;
}

Matrix complex_gaussian(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = Complex(re, im);
    }
  return m;
}

}  // namespace qtomo
