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

#include <cmath>
#include <cstdint>
#include <functional>

#include "qtomo/charts.hpp"
#include "qtomo/matrix.hpp"
#include "qtomo/rng.hpp"

namespace qtomo::testing {

inline Matrix random_hermitian(int dim, std::uint64_t seed) {
  Rng rng = make_rng(seed, {0x4e});
  const Matrix g = complex_gaussian(dim, dim, rng);
  return 0.5 * (g + g.adjoint());
}

inline Matrix random_upper(int rows, int cols, std::uint64_t seed) {
  Rng rng = make_rng(seed, {0x7a});
  Matrix t = complex_gaussian(rows, cols, rng);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < i && j < cols; ++j) t(i, j) = 0.0;
  return t;
}

inline RealVector random_real(int n, std::uint64_t seed, double scale = 1.0) {
  Rng rng = make_rng(seed, {0x11});
  std::normal_distribution<double> nd(0.0, scale);
  RealVector v(n);
  for (int i = 0; i < n; ++i) v(i) = nd(rng);
  return v;
}

// Direct Pauli matrices for small hand-built oracles.
inline Matrix sigma(char axis) {
  Matrix m(2, 2);
  const Complex i(0.0, 1.0);
  switch (axis) {
    case 'x':
      m << 0, 1, 1, 0;
      break;
    case 'y':
      m << 0, -i, i, 0;
      break;
    case 'z':
      m << 1, 0, 0, -1;
      break;
    default:
      m << 1, 0, 0, 1;
  }
  return m;
}

inline Matrix bloch_state(double x, double y, double z) {
  return 0.5 * (sigma('0') + x * sigma('x') + y * sigma('y') + z * sigma('z'));
}

// Relative error |a - b| / max(|b|, floor) over the entries of two vectors.
inline double rel_error(const RealVector& a, const RealVector& b, double floor = 1e-8) {
  return (a - b).norm() / std::max(b.norm(), floor);
}

// Central finite-difference Jacobian of a chart.
inline std::vector<Matrix> fd_jacobian(const Chart& chart, const RealVector& theta, double h) {
  std::vector<Matrix> out;
  for (int j = 0; j < chart.parameters(); ++j) {
    RealVector tp = theta, tm = theta;
    tp(j) += h;
    tm(j) -= h;
    out.push_back((chart.state(tp) - chart.state(tm)) / (2.0 * h));
  }
  return out;
}

}  // namespace qtomo::testing
