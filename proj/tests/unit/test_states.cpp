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

#include <gtest/gtest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "qtomo/errors.hpp"
#include "qtomo/pauli.hpp"
#include "qtomo/states.hpp"
#include "test_util.hpp"

namespace qtomo {
namespace {

using testing::random_upper;

int eigen_count_above(const Matrix& m, double threshold) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
  return static_cast<int>((eig.eigenvalues().array() > threshold).count());
}

TEST(DensityMatrix, Validation) {
  Matrix m = Matrix::Identity(2, 2);
  EXPECT_THROW(DensityMatrix{m}, ValidationError);  // trace 2
  m << 1.2, 0, 0, -0.2;
  EXPECT_THROW(DensityMatrix{m}, ValidationError);  // negative eigenvalue
  m << 0.5, 0.1, 0.2, 0.5;
  EXPECT_THROW(DensityMatrix{m}, ValidationError);  // not selfadjoint
  EXPECT_NO_THROW(DensityMatrix::maximally_mixed(8));
}

TEST(TrapezoidalFactor, RejectsEntriesBelowDiagonal) {
  Matrix t = Matrix::Ones(2, 3);
  EXPECT_THROW(TrapezoidalFactor{t}, ValidationError);
  t(1, 0) = 0.0;
  EXPECT_NO_THROW(TrapezoidalFactor{t});
  EXPECT_THROW(TrapezoidalFactor{Matrix::Ones(3, 2)}, ValidationError);
}

TEST(StateFromFactor, BasisProjector) {
  Matrix t(1, 2);
  t << 1.0, 0.0;
  const DensityMatrix rho = state_from_factor(TrapezoidalFactor(t));
  EXPECT_LT((rho.matrix() - DensityMatrix::pure(Vector::Unit(2, 0)).matrix()).norm(), 1e-12);
}

TEST(StateFromFactor, IdentityFactor) {
  const Matrix t = Matrix::Identity(2, 2) / std::sqrt(2.0);
  EXPECT_LT((state_from_factor(TrapezoidalFactor(t)).matrix() - Matrix::Identity(2, 2) / 2.0).norm(), 1e-12);
}

TEST(StateFromFactor, RankOfRandomFactor) {
  const DensityMatrix rho = state_from_factor(TrapezoidalFactor(random_upper(2, 4, 1)));
  EXPECT_EQ(eigen_count_above(rho.matrix(), 1e-12), 2);
}

TEST(StateFromFactor, ZeroFactorThrows) {
  EXPECT_THROW(state_from_factor(TrapezoidalFactor(Matrix::Zero(1, 2))), ValidationError);
}

TEST(StateFromFactor, RowPhaseGaugeInvariance) {
  const Matrix t = random_upper(3, 8, 2);
  Matrix u = t;
  u.row(0) *= std::polar(1.0, 0.3);
  u.row(2) *= std::polar(1.0, -2.1);
  EXPECT_LT((state_from_factor(TrapezoidalFactor(t)).matrix() - state_from_factor(TrapezoidalFactor(u)).matrix())
                .cwiseAbs()
                .maxCoeff(),
            1e-12);
}

TEST(RandomState, PureQubitOnBlochSphere) {
  const DensityMatrix rho = random_state(1, 1, 4);
  const auto c = pauli_expand(rho.matrix());
  const double r = std::sqrt(2.0) * std::sqrt(c[1] * c[1] + c[2] * c[2] + c[3] * c[3]);
  EXPECT_NEAR(r, 1.0, 1e-10);
}

TEST(RandomState, ExactRank) {
  EXPECT_EQ(eigen_count_above(random_state(4, 3, 5).matrix(), 1e-12), 3);
  EXPECT_EQ(random_state(4, 3, 5).numerical_rank(), 3);
  EXPECT_THROW(random_state(2, 5, 1), ValidationError);
  EXPECT_THROW(random_state(2, 0, 1), ValidationError);
}

TEST(RandomState, SeedsDifferAndRepeat) {
  EXPECT_GT(trace_norm_distance(random_state(2, 1, 1).matrix(), random_state(2, 1, 2).matrix()), 0.0);
  EXPECT_EQ(random_state(2, 2, 3).matrix(), random_state(2, 2, 3).matrix());
}

TEST(RandomState, SignificantSpectrum) {
  const DensityMatrix rho = random_significant_state(4, 3, 17, 0.02);
  const RealVector ev = rho.eigenvalues();
  EXPECT_GE(ev(2), 0.02 * ev(0));
  EXPECT_LT(ev(3), 1e-12);
}

TEST(HaarVector, UnitNormAndMeanOverlap) {
  // E|<0|psi>|^2 = 1/d for Haar vectors.
  double mean = 0.0;
  const int reps = 4000;
  for (int i = 0; i < reps; ++i) {
    const Vector v = haar_random_vector(2, static_cast<std::uint64_t>(i));
    EXPECT_NEAR(v.norm(), 1.0, 1e-12);
    mean += std::norm(v(0));
  }
  mean /= reps;
  // Var |v_0|^2 = (d-1)/(d^2(d+1)) = 3/80.
  EXPECT_NEAR(mean, 0.25, 5.0 * std::sqrt(3.0 / 80.0 / reps));
}

TEST(Distances, Examples) {
  const DensityMatrix zero = DensityMatrix::pure(Vector::Unit(2, 0));
  const DensityMatrix one = DensityMatrix::pure(Vector::Unit(2, 1));
  EXPECT_EQ(hs_distance_sq(zero, zero), 0.0);
  EXPECT_NEAR(hs_distance_sq(zero, one), 2.0, 1e-14);
  EXPECT_THROW(hs_distance_sq(zero.matrix(), Matrix::Zero(4, 4)), ValidationError);
}

TEST(Distances, PureStatesNormTwoVersusTraceNorm) {
  // For pure states rho - sigma has eigenvalues +-s, so ||.||_2 = ||.||_1 / sqrt2.
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Matrix a = random_state(2, 1, seed).matrix();
    const Matrix b = random_state(2, 1, seed + 10).matrix();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(a - b);
    const double l1 = eig.eigenvalues().cwiseAbs().sum();
    EXPECT_NEAR(trace_norm_distance(a, b), l1, 1e-12);
    EXPECT_NEAR(std::sqrt(hs_distance_sq(a, b)), l1 / std::sqrt(2.0), 1e-12);
  }
  // Orthogonal pure states: trace distance 2, norm-two sqrt2.
  const Matrix p = DensityMatrix::pure(Vector::Unit(4, 1)).matrix();
  const Matrix q = DensityMatrix::pure(Vector::Unit(4, 2)).matrix();
  EXPECT_NEAR(trace_norm_distance(p, q), 2.0, 1e-12);
  EXPECT_NEAR(std::sqrt(hs_distance_sq(p, q)), std::sqrt(2.0), 1e-12);
}

TEST(Distances, Parseval) {
  for (int k = 1; k <= 3; ++k) {
    const Matrix a = random_state(k, std::min(2, pow2(k)), 40 + k).matrix();
    const Matrix b = random_state(k, std::min(3, pow2(k)), 50 + k).matrix();
    const auto ca = pauli_expand(a), cb = pauli_expand(b);
    double sum = 0.0;
    for (std::size_t i = 0; i < ca.values().size(); ++i) sum += (ca[i] - cb[i]) * (ca[i] - cb[i]);
    EXPECT_NEAR(hs_distance_sq(a, b), sum, 1e-10);
  }
}

TEST(Factors, CholeskyFactorReproducesState) {
  const DensityMatrix rho = random_state(3, 3, 12);
  const TrapezoidalFactor t = cholesky_factor(rho, 3);
  EXPECT_EQ(t.rank(), 3);
  EXPECT_NEAR(t.frobenius_sq(), 1.0, 1e-12);
  EXPECT_LT((t.matrix().adjoint() * t.matrix() - rho.matrix()).norm(), 1e-10);
  for (int i = 0; i < 3; ++i) {
    EXPECT_GT(t.matrix()(i, i).real(), 0.0);
    EXPECT_NEAR(t.matrix()(i, i).imag(), 0.0, 1e-14);
  }
}

TEST(Factors, CholeskyFactorRejectsDeficientLeadingMinor) {
  // |1><1| has a vanishing top-left entry.
  EXPECT_THROW(cholesky_factor(DensityMatrix::pure(Vector::Unit(2, 1)), 1), NumericalError);
}

TEST(Factors, EigenFactorHandlesAnyState) {
  const DensityMatrix one = DensityMatrix::pure(Vector::Unit(2, 1));
  const TrapezoidalFactor t = factor_from_state(one, 1);
  EXPECT_LT((state_from_factor(t).matrix() - one.matrix()).norm(), 1e-12);
  const DensityMatrix rho = random_state(3, 2, 6);
  EXPECT_LT((state_from_factor(factor_from_state(rho, 2)).matrix() - rho.matrix()).norm(), 1e-10);
}

}  // namespace
}  // namespace qtomo
