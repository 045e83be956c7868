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

#include "qtomo/density_matrix.hpp"

#include <bit>
#include <sstream>

#include "qtomo/errors.hpp"

namespace qtomo {

DensityMatrix::DensityMatrix(Matrix m) : m_(std::move(m)) {
  if (m_.rows() == 0 || m_.rows() != m_.cols())
    throw ValidationError("density matrix must be square and non-empty");
  if (!m_.allFinite()) throw ValidationError("density matrix has non-finite entries");
  const double asym = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kTolerance) {
    std::ostringstream os;
    os << "density matrix is not selfadjoint (max deviation " << asym << ")";
    throw ValidationError(os.str());
  }
  const Complex tr = m_.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > kTolerance) {
    std::ostringstream os;
    os << "density matrix trace is " << tr.real() << ", expected 1";
    throw ValidationError(os.str());
  }
  // Symmetrize away the sub-tolerance asymmetry so downstream code can rely
  // on exact selfadjointness.
  m_ = (0.5 * (m_ + m_.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -kTolerance) {
    std::ostringstream os;
    os << "density matrix has negative eigenvalue " << min_eig;
    throw ValidationError(os.str());
  }
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  if (dim < 1) throw ValidationError("dimension must be positive");
  return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::pure(const Vector& psi) {
  const double norm_sq = psi.squaredNorm();
  if (!(norm_sq > 0.0)) throw ValidationError("pure state vector is zero");
  return DensityMatrix(psi * psi.adjoint() / norm_sq);
}

int DensityMatrix::qubits() const {
  const auto d = static_cast<unsigned>(dim());
  if (!std::has_single_bit(d)) return -1;
  return std::countr_zero(d);
}

RealVector DensityMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().reverse();
}

int DensityMatrix::numerical_rank(double threshold) const {
  const RealVector ev = eigenvalues();
  return static_cast<int>((ev.array() > threshold).count());
}

double DensityMatrix::purity() const { return m_.squaredNorm(); }

TrapezoidalFactor::TrapezoidalFactor(Matrix t) : t_(std::move(t)) {
  if (t_.rows() < 1 || t_.rows() > t_.cols())
    throw ValidationError("trapezoidal factor needs 1 <= rows <= cols");
  if (!t_.allFinite()) throw ValidationError("trapezoidal factor has non-finite entries");
  for (Eigen::Index i = 0; i < t_.rows(); ++i)
    for (Eigen::Index j = 0; j < i; ++j)
      if (t_(i, j) != Complex(0.0, 0.0))
        throw ValidationError("trapezoidal factor has a nonzero entry below the diagonal");
}

TrapezoidalFactor TrapezoidalFactor::identity(int rows, int dim) {
  Matrix t = Matrix::Zero(rows, dim);
  for (int i = 0; i < rows; ++i) t(i, i) = 1.0;
  return TrapezoidalFactor(std::move(t));
}

int TrapezoidalFactor::raw_parameter_count() const { return 2 * trapezoid_entries(rank(), dim()); }

}  // namespace qtomo
