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

#include <vector>

#include "qtomo/dataset.hpp"
#include "qtomo/density_matrix.hpp"

namespace qtomo {

// Count log-likelihood l = sum_{s,d} N(s|d) log P(s|d) (factorials dropped)
// evaluated on raw trapezoidal factors through the factored basis path.
//
// Settings are visited depth-first over qubits so rotations of shared
// prefixes are reused; the gradient is accumulated on the way back up.
class LikelihoodModel {
 public:
  // Requires a complete dataset.
  explicit LikelihoodModel(const CountsDataset& data);

  int qubits() const { return qubits_; }
  int dim() const { return pow2(qubits_); }
  double total() const { return total_; }
  const std::vector<double>& counts() const { return counts_; }

  // l at rho = T^dagger T / Tr(T^dagger T). Probabilities below `floor` are
  // replaced by `floor` inside the logarithm (floor = 0 disables clamping,
  // giving -inf when a positive count meets a zero probability).
  // When `grad` is non-null it receives dl/d conj(T) (same shape as T,
  // entries below the diagonal zeroed); clamped cells contribute nothing.
  double evaluate(const Matrix& t, Matrix* grad, double floor = 0.0) const;

  // l at an arbitrary state via the dense projector path.
  double evaluate(const DensityMatrix& rho) const;

 private:
  struct Workspace;
  void visit(int level, std::size_t prefix, Workspace& ws, bool want_grad) const;

  int qubits_;
  double total_;
  std::vector<double> counts_;  // setting-major, [d * 2^k + s]
};

// Raw real parameters of a trapezoid: (Re, Im) pairs of the entries on or
// above the diagonal, row by row.
RealVector pack_factor(const Matrix& t);
Matrix unpack_factor(const RealVector& x, int rank, int dim);
// Real gradient with respect to pack_factor coordinates from dl/d conj(T).
RealVector pack_gradient(const Matrix& grad_conj);

// l(rho; data); -inf when a positive count sits on a zero probability.
double log_likelihood(const DensityMatrix& rho, const CountsDataset& data);
double log_likelihood(const TrapezoidalFactor& t, const CountsDataset& data);

// Exact gradient of l over pack_factor coordinates of T. Throws
// NumericalError when l(T) = -inf.
RealVector loglik_gradient(const TrapezoidalFactor& t, const CountsDataset& data);

}  // namespace qtomo
