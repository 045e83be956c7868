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

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

#include "qtomo/matrix.hpp"

namespace qtomo {

using Rng = std::mt19937_64;

// Mixes a base seed with a path of indices (replicate, setting, restart, ...)
// into an independent sub-seed. Results depend only on the arguments, never
// on the order in which workers request them.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

inline Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> path = {}) {
  return Rng(derive_seed(seed, path));
}

// One multinomial(n, p) draw by sequential binomial conditioning.
// `p` need not be exactly normalized; tiny negative entries are clamped.
std::vector<std::int64_t> sample_multinomial(std::int64_t n, std::span<const double> p, Rng& rng);

// Matrix of independent standard complex Gaussians, E|z|^2 = 1.
Matrix complex_gaussian(int rows, int cols, Rng& rng);

}  // namespace qtomo
