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
#include <memory>

#include "qtomo/charts.hpp"
#include "qtomo/errors.hpp"
#include "qtomo/states.hpp"
#include "test_util.hpp"

namespace qtomo {
namespace {

using testing::fd_jacobian;
using testing::random_real;

// Relative Frobenius error of every Jacobian matrix against central
// differences with step 1e-5.
void check_jacobian(const Chart& chart, const RealVector& theta) {
  const auto jac = chart.jacobian(theta);
  const auto fd = fd_jacobian(chart, theta, 1e-5);
  ASSERT_EQ(static_cast<int>(jac.size()), chart.parameters());
  for (std::size_t j = 0; j < jac.size(); ++j) {
    EXPECT_LT((jac[j] - jac[j].adjoint()).norm(), 1e-12);
    EXPECT_LT(std::abs(jac[j].trace()), 1e-12);
    EXPECT_LT((jac[j] - fd[j]).norm() / std::max(jac[j].norm(), 1e-8), 1e-6) << "parameter " << j;
  }
}

TEST(PureStateChart, ReferenceReproducesState) {
  const Vector psi = haar_random_vector(2, 3);
  const PureStateChart chart(psi);
  EXPECT_EQ(chart.parameters(), 6);
  const Matrix rho = psi * psi.adjoint();
  EXPECT_LT((chart.state(chart.reference()) - rho).norm(), 1e-12);
}

TEST(PureStateChart, AnchorsAtLargestCoefficient) {
  Vector psi = Vector::Zero(4);
  psi << 0.1, 0.2, 0.9, 0.3;
  const PureStateChart chart(psi / psi.norm());
  EXPECT_EQ(chart.anchor(), 2);
  // |1> alone has c_0 = 0, where an anchor at index 0 would be singular.
  const PureStateChart one(Vector::Unit(2, 1));
  EXPECT_EQ(one.anchor(), 1);
  EXPECT_LT((one.state(one.reference()) - DensityMatrix::pure(Vector::Unit(2, 1)).matrix()).norm(), 1e-12);
}

TEST(PureStateChart, JacobianFiniteDifferences) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const int k = 1 + static_cast<int>(seed % 3);
    const PureStateChart chart(haar_random_vector(k, seed));
    const RealVector theta = chart.reference() + random_real(chart.parameters(), seed, 0.02);
    check_jacobian(chart, theta);
  }
}

TEST(PureStateChart, OutsideDomainThrows) {
  const PureStateChart chart(Vector::Unit(2, 0));
  RealVector theta(2);
  theta << 0.8, 0.8;
  EXPECT_THROW(chart.state(theta), ValidationError);
}

TEST(CholeskyChart, ParameterCountAndTopLeftEntry) {
  EXPECT_EQ(CholeskyChart::parameter_count(16, 1), 30);
  EXPECT_EQ(CholeskyChart::parameter_count(16, 16), 255);
  const CholeskyChart chart(4, 2);
  const RealVector theta = random_real(chart.parameters(), 2, 0.2);
  const Matrix t = chart.factor(theta);
  EXPECT_NEAR(t(0, 0).real(), std::sqrt(1.0 - theta.squaredNorm()), 1e-14);
  EXPECT_NEAR(t.squaredNorm(), 1.0, 1e-12);
  EXPECT_NEAR(chart.state(theta).trace().real(), 1.0, 1e-12);
}

TEST(CholeskyChart, ReferenceIsCholeskyCoordinatesOfState) {
  const DensityMatrix rho = random_state(2, 2, 8);
  const CholeskyChart chart(rho, 2);
  EXPECT_LT((chart.state(chart.reference()) - rho.matrix()).norm(), 1e-10);
}

TEST(CholeskyChart, JacobianFiniteDifferences) {
  int count = 0;
  for (std::uint64_t seed = 1; count < 20; ++seed) {
    const int dim = seed % 2 ? 2 : 4;
    const int rank = 1 + static_cast<int>(seed % dim);
    const DensityMatrix rho = random_state(dim == 2 ? 1 : 2, rank, seed);
    const CholeskyChart chart(rho, rank);
    check_jacobian(chart, chart.reference());
    ++count;
  }
}

TEST(LinearChart, ComposesWithBase) {
  auto base = std::make_shared<CholeskyChart>(random_state(1, 2, 4), 2);
  const RealMatrix a = RealMatrix::Identity(3, 3) + 0.3 * testing::random_real(9, 5).reshaped(3, 3);
  const LinearChart chart(base, a, base->reference());
  EXPECT_LT(chart.reference().norm(), 1e-14);
  EXPECT_LT((chart.state(chart.reference()) - base->state(base->reference())).norm(), 1e-14);
  check_jacobian(chart, random_real(3, 6, 0.01));
}

}  // namespace
}  // namespace qtomo
