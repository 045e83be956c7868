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

#include "qtomo/states.hpp"

#include <cmath>

#include "qtomo/errors.hpp"
#include "qtomo/rng.hpp"

namespace qtomo {
namespace {

void check_rank(int qubits, int rank) {
  if (qubits < 1 || qubits > 12) throw ValidationError("qubit count must be in [1, 12]");
  if (rank < 1 || rank > pow2(qubits)) throw ValidationError("rank must satisfy 1 <= r <= 2^k");
}

}  // namespace

DensityMatrix state_from_factor(const TrapezoidalFactor& t) {
  const double norm = t.frobenius_sq();
  if (!(norm > 0.0)) throw ValidationError("cannot build a state from a zero factor");
  Matrix rho = t.matrix().adjoint() * t.matrix() / norm;
  return DensityMatrix(std::move(rho));
}

DensityMatrix random_state(int qubits, int rank, std::uint64_t seed) {
  check_rank(qubits, rank);
  Rng rng = make_rng(seed, {0x5157ULL});
  const Matrix g = complex_gaussian(rank, pow2(qubits), rng);
  Matrix rho = g.adjoint() * g;
  rho /= rho.trace().real();
  return DensityMatrix(std::move(rho));
}

DensityMatrix random_significant_state(int qubits, int rank, std::uint64_t seed, double min_ratio) {
  check_rank(qubits, rank);
  for (std::uint64_t attempt = 0; attempt < 10000; ++attempt) {
    DensityMatrix rho = random_state(qubits, rank, derive_seed(seed, {attempt}));
    const RealVector ev = rho.eigenvalues();
    if (ev(rank - 1) >= min_ratio * ev(0)) return rho;
  }
  throw NumericalError("could not draw a state with significant eigenvalues");
}

Vector haar_random_vector(int qubits, std::uint64_t seed) {
  check_rank(qubits, 1);
  Rng rng = make_rng(seed, {0x4aa2ULL});
  Vector v = complex_gaussian(pow2(qubits), 1, rng).col(0);
  v.normalize();
  return v;
}

double hs_distance_sq(const Matrix& rho, const Matrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) throw ValidationError("dimension mismatch");
  return (rho - sigma).squaredNorm();
}

double hs_distance_sq(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return hs_distance_sq(rho.matrix(), sigma.matrix());
}

double trace_norm_distance(const Matrix& rho, const Matrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) throw ValidationError("dimension mismatch");
  const Matrix diff = 0.5 * ((rho - sigma) + (rho - sigma).adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(diff, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

TrapezoidalFactor cholesky_factor(const DensityMatrix& rho, int rank) {
  const int d = rho.dim();
  if (rank < 1 || rank > d) throw ValidationError("rank must satisfy 1 <= r <= d");
  const Matrix& m = rho.matrix();
  Matrix t = Matrix::Zero(rank, d);
  for (int i = 0; i < rank; ++i) {
    Complex diag = m(i, i);
    for (int p = 0; p < i; ++p) diag -= std::conj(t(p, i)) * t(p, i);
    if (diag.real() <= 1e-14)
      throw NumericalError("state is deficient: leading principal minor has lower rank");
    const double tii = std::sqrt(diag.real());
    t(i, i) = tii;
    for (int j = i + 1; j < d; ++j) {
      Complex v = m(i, j);
      for (int p = 0; p < i; ++p) v -= std::conj(t(p, i)) * t(p, j);
      t(i, j) = v / tii;
    }
  }
  return TrapezoidalFactor(std::move(t));
}

TrapezoidalFactor factor_from_state(const DensityMatrix& rho, int rank) {
  const int d = rho.dim();
  if (rank < 1 || rank > d) throw ValidationError("rank must satisfy 1 <= r <= d");
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
  // W (d x r) with rho ~ W W^dagger; T = R from the QR of W^dagger's columns.
  Matrix w(d, rank);
  for (int i = 0; i < rank; ++i) {
    const int col = d - 1 - i;
    w.col(i) = std::sqrt(std::max(es.eigenvalues()(col), 0.0)) * es.eigenvectors().col(col);
  }
  // T^dagger T = W W^dagger with T = Q^dagger W^dagger for any unitary Q; an LQ
  // step (QR of W) makes the r x d matrix W^dagger upper trapezoidal up to
  // row mixing.
  Matrix wd = w.adjoint();  // r x d
  Eigen::HouseholderQR<Matrix> qr(wd);
  Matrix t = qr.householderQ().adjoint() * wd;
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < i; ++j) t(i, j) = 0.0;
  return TrapezoidalFactor(std::move(t));
}

}  // namespace qtomo
