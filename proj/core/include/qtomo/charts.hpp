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

#include <memory>
#include <vector>

#include "qtomo/density_matrix.hpp"

namespace qtomo {

// A differentiable parametrization theta -> rho_theta of a family of states,
// used for Fisher information and local error geometry.
class Chart {
 public:
  virtual ~Chart() = default;

  virtual int dim() const = 0;          // Hilbert-space dimension d.
  virtual int parameters() const = 0;   // p = dim(theta).
  // Parameter of the reference state the chart was built around.
  virtual RealVector reference() const = 0;
  // rho_theta. Throws ValidationError outside the chart domain.
  virtual Matrix state(const RealVector& theta) const = 0;
  // d rho / d theta_j for j = 0..p-1; each is selfadjoint and traceless.
  virtual std::vector<Matrix> jacobian(const RealVector& theta) const = 0;
};

// Pure states near a reference |psi>, anchored at the coefficient a of
// largest modulus:
//   psi_theta = sqrt(1 - |theta|^2) e_a + sum_{m != a} (theta_m + i theta_{m'}) e_m
// with real parts first, then imaginary parts, in basis order.
class PureStateChart final : public Chart {
 public:
  explicit PureStateChart(const Vector& psi);

  int dim() const override { return dim_; }
  int parameters() const override { return 2 * (dim_ - 1); }
  RealVector reference() const override { return reference_; }
  Matrix state(const RealVector& theta) const override;
  std::vector<Matrix> jacobian(const RealVector& theta) const override;

  int anchor() const { return anchor_; }
  Vector vector(const RealVector& theta) const;

 private:
  int dim_;
  int anchor_;
  RealVector reference_;
};

// Rank-r Cholesky chart of states T^dagger T with T an r x d upper
// trapezoid, Tr(T^dagger T) = 1, real diagonal. theta = (R, I, D): real and
// imaginary parts of the strictly upper entries (row by row, left to right),
// then the diagonal entries T_22..T_rr. The top-left entry is
//   T_11 = sqrt(1 - (|R|^2 + |I|^2 + |D|^2)).
// Parameter count 2dr - r^2 - 1.
class CholeskyChart final : public Chart {
 public:
  // Chart around `rho`, which must admit a rank-r Cholesky factor.
  CholeskyChart(const DensityMatrix& rho, int rank);
  // Chart without a meaningful reference (reference() is the origin).
  CholeskyChart(int dim, int rank);

  int dim() const override { return dim_; }
  int parameters() const override { return parameter_count(dim_, rank_); }
  RealVector reference() const override { return reference_; }
  Matrix state(const RealVector& theta) const override;
  std::vector<Matrix> jacobian(const RealVector& theta) const override;

  int rank() const { return rank_; }
  Matrix factor(const RealVector& theta) const;
  // theta of a factor with real positive diagonal (e.g. from cholesky_factor),
  // after scaling it to unit Frobenius norm.
  RealVector parameters_of(const TrapezoidalFactor& t) const;

  static int parameter_count(int dim, int rank) { return 2 * dim * rank - rank * rank - 1; }

 private:
  int dim_;
  int rank_;
  RealVector reference_;
};

// theta = origin + A phi for a nonsingular square A; re-expresses a chart in
// linearly transformed coordinates.
class LinearChart final : public Chart {
 public:
  LinearChart(std::shared_ptr<const Chart> base, RealMatrix a, RealVector origin);

  int dim() const override { return base_->dim(); }
  int parameters() const override { return static_cast<int>(a_.cols()); }
  RealVector reference() const override;
  Matrix state(const RealVector& phi) const override;
  std::vector<Matrix> jacobian(const RealVector& phi) const override;

 private:
  std::shared_ptr<const Chart> base_;
  RealMatrix a_;
  RealVector origin_;
};

}  // namespace qtomo
