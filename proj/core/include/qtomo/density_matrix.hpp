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

#include "qtomo/matrix.hpp"

namespace qtomo {

// A validated quantum state on C^d: selfadjoint, positive semidefinite and
// unit trace, each to within 1e-10.
class DensityMatrix {
 public:
  static constexpr double kTolerance = 1e-10;

  // Validates and stores `m`. Throws ValidationError if any invariant fails.
  explicit DensityMatrix(Matrix m);

  // I/d.
  static DensityMatrix maximally_mixed(int dim);
  // |psi><psi| / <psi|psi>.
  static DensityMatrix pure(const Vector& psi);

  int dim() const { return static_cast<int>(m_.rows()); }
  // log2(dim) when dim is a power of two, otherwise -1.
  int qubits() const;
  const Matrix& matrix() const { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }

  // Eigenvalues in decreasing order.
  RealVector eigenvalues() const;
  // Number of eigenvalues above `threshold`.
  int numerical_rank(double threshold = 1e-12) const;
  double purity() const;

 private:
  Matrix m_;
};

// An r x d upper-trapezoidal complex matrix T (T_ij = 0 for j < i). It
// represents the state T^dagger T / Tr(T^dagger T), rank at most r.
class TrapezoidalFactor {
 public:
  // Zero entries below the diagonal are enforced: a nonzero entry there is
  // a ValidationError. Requires 1 <= rows <= cols.
  explicit TrapezoidalFactor(Matrix t);

  // First `rows` rows of the canonical basis factor: T_ii = 1.
  static TrapezoidalFactor identity(int rows, int dim);

  int rank() const { return static_cast<int>(t_.rows()); }
  int dim() const { return static_cast<int>(t_.cols()); }
  const Matrix& matrix() const { return t_; }
  double frobenius_sq() const { return t_.squaredNorm(); }

  // Number of real parameters in the raw (unnormalized, ungauged) factor:
  // twice the number of free complex entries.
  int raw_parameter_count() const;

 private:
  Matrix t_;
};

// Number of complex entries on or above the diagonal of an r x d trapezoid.
constexpr int trapezoid_entries(int rows, int dim) { return rows * dim - rows * (rows - 1) / 2; }

}  // namespace qtomo
