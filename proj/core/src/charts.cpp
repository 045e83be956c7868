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

#include "qtomo/charts.hpp"

#include <cmath>

#include "qtomo/errors.hpp"
#include "qtomo/states.hpp"

namespace qtomo {
namespace {

Matrix symmetrized_outer(const Vector& a, const Vector& b) {
  // a b^dagger + b a^dagger
  Matrix m = a * b.adjoint();
  return m + m.adjoint();
}

}  // namespace

PureStateChart::PureStateChart(const Vector& psi) : dim_(static_cast<int>(psi.size())), anchor_(0) {
  if (dim_ < 2) throw ValidationError("pure-state chart needs dimension >= 2");
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw ValidationError("pure-state chart needs a nonzero vector");
  psi.cwiseAbs().maxCoeff(&anchor_);
  // Fix the global phase so the anchor coefficient is real and positive.
  const Complex phase = std::conj(psi(anchor_)) / std::abs(psi(anchor_));
  const Vector v = psi * phase / norm;
  reference_.resize(parameters());
  int m = 0;
  for (int i = 0; i < dim_; ++i) {
    if (i == anchor_) continue;
    reference_(m) = v(i).real();
    reference_(m + dim_ - 1) = v(i).imag();
    ++m;
  }
}

Vector PureStateChart::vector(const RealVector& theta) const {
  if (theta.size() != parameters()) throw ValidationError("parameter dimension mismatch");
  const double rest = 1.0 - theta.squaredNorm();
  if (!(rest > 0.0)) throw ValidationError("parameter outside the pure-state chart domain");
  Vector v(dim_);
  v(anchor_) = std::sqrt(rest);
  int m = 0;
  for (int i = 0; i < dim_; ++i) {
    if (i == anchor_) continue;
    v(i) = Complex(theta(m), theta(m + dim_ - 1));
    ++m;
  }
  return v;
}

Matrix PureStateChart::state(const RealVector& theta) const {
  const Vector v = vector(theta);
  return v * v.adjoint();
}

std::vector<Matrix> PureStateChart::jacobian(const RealVector& theta) const {
  const Vector v = vector(theta);
  const double c = v(anchor_).real();
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(parameters()));
  for (int j = 0; j < parameters(); ++j) {
    const bool imag = j >= dim_ - 1;
    const int m = imag ? j - (dim_ - 1) : j;
    const int index = m < anchor_ ? m : m + 1;
    Vector dv = Vector::Zero(dim_);
    dv(index) = imag ? Complex(0.0, 1.0) : Complex(1.0, 0.0);
    dv(anchor_) = -theta(j) / c;
    out.push_back(symmetrized_outer(dv, v));
  }
  return out;
}

CholeskyChart::CholeskyChart(const DensityMatrix& rho, int rank) : dim_(rho.dim()), rank_(rank) {
  const TrapezoidalFactor t = cholesky_factor(rho, rank);
  reference_ = parameters_of(t);
}

CholeskyChart::CholeskyChart(int dim, int rank) : dim_(dim), rank_(rank) {
  if (rank < 1 || rank > dim) throw ValidationError("rank must satisfy 1 <= r <= d");
  reference_ = RealVector::Zero(parameters());
}

Matrix CholeskyChart::factor(const RealVector& theta) const {
  if (theta.size() != parameters()) throw ValidationError("parameter dimension mismatch");
  const double rest = 1.0 - theta.squaredNorm();
  if (!(rest > 0.0)) throw ValidationError("parameter outside the Cholesky chart domain");
  const int off = trapezoid_entries(rank_, dim_) - rank_;
  Matrix t = Matrix::Zero(rank_, dim_);
  int m = 0;
  for (int i = 0; i < rank_; ++i)
    for (int j = i + 1; j < dim_; ++j) {
      t(i, j) = Complex(theta(m), theta(m + off));
      ++m;
    }
  t(0, 0) = std::sqrt(rest);
  for (int i = 1; i < rank_; ++i) t(i, i) = theta(2 * off + i - 1);
  return t;
}

Matrix CholeskyChart::state(const RealVector& theta) const {
  const Matrix t = factor(theta);
  return t.adjoint() * t;
}

std::vector<Matrix> CholeskyChart::jacobian(const RealVector& theta) const {
  const Matrix t = factor(theta);
  const double t11 = t(0, 0).real();
  const int off = trapezoid_entries(rank_, dim_) - rank_;
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(parameters()));
  auto push = [&](const Matrix& dt) {
    Matrix m = dt.adjoint() * t;
    out.push_back(m + m.adjoint());
  };
  std::vector<std::pair<int, int>> positions;
  for (int i = 0; i < rank_; ++i)
    for (int j = i + 1; j < dim_; ++j) positions.emplace_back(i, j);
  for (int pass = 0; pass < 2; ++pass) {
    for (int q = 0; q < off; ++q) {
      const auto [i, j] = positions[static_cast<std::size_t>(q)];
      const int p = pass * off + q;
      Matrix dt = Matrix::Zero(rank_, dim_);
      dt(i, j) = pass == 0 ? Complex(1.0, 0.0) : Complex(0.0, 1.0);
      dt(0, 0) = -theta(p) / t11;
      push(dt);
    }
  }
  for (int i = 1; i < rank_; ++i) {
    const int p = 2 * off + i - 1;
    Matrix dt = Matrix::Zero(rank_, dim_);
    dt(i, i) = 1.0;
    dt(0, 0) = -theta(p) / t11;
    push(dt);
  }
  return out;
}

RealVector CholeskyChart::parameters_of(const TrapezoidalFactor& t) const {
  if (t.rank() != rank_ || t.dim() != dim_) throw ValidationError("factor shape does not match chart");
  const Matrix& m = t.matrix();
  const double norm = std::sqrt(t.frobenius_sq());
  const int off = trapezoid_entries(rank_, dim_) - rank_;
  RealVector theta(parameters());
  int p = 0;
  for (int i = 0; i < rank_; ++i)
    for (int j = i + 1; j < dim_; ++j) {
      theta(p) = m(i, j).real() / norm;
      theta(p + off) = m(i, j).imag() / norm;
      ++p;
    }
  for (int i = 1; i < rank_; ++i) theta(2 * off + i - 1) = m(i, i).real() / norm;
  return theta;
}

LinearChart::LinearChart(std::shared_ptr<const Chart> base, RealMatrix a, RealVector origin)
    : base_(std::move(base)), a_(std::move(a)), origin_(std::move(origin)) {
  if (!base_) throw ValidationError("null base chart");
  if (a_.rows() != base_->parameters() || a_.cols() != a_.rows() || origin_.size() != a_.rows())
    throw ValidationError("linear chart map has the wrong shape");
}

RealVector LinearChart::reference() const { return a_.fullPivLu().solve(base_->reference() - origin_); }

Matrix LinearChart::state(const RealVector& phi) const { return base_->state(origin_ + a_ * phi); }

std::vector<Matrix> LinearChart::jacobian(const RealVector& phi) const {
  const auto base_jac = base_->jacobian(origin_ + a_ * phi);
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(a_.cols()));
  for (Eigen::Index j = 0; j < a_.cols(); ++j) {
    Matrix m = Matrix::Zero(dim(), dim());
    for (Eigen::Index i = 0; i < a_.rows(); ++i)
      if (a_(i, j) != 0.0) m += a_(i, j) * base_jac[static_cast<std::size_t>(i)];
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace qtomo
