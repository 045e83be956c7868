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
#include "qtomo/inference.hpp"
#include "qtomo/likelihood.hpp"
#include "qtomo/states.hpp"
#include "test_util.hpp"

namespace qtomo {
namespace {

using testing::bloch_state;

CountsDataset one_qubit(std::vector<std::int64_t> x, std::vector<std::int64_t> y, std::vector<std::int64_t> z) {
  CountsDataset data(1);
  data.set_counts(Setting::parse("x"), std::move(x));
  data.set_counts(Setting::parse("y"), std::move(y));
  data.set_counts(Setting::parse("z"), std::move(z));
  return data;
}

TEST(FitRank, ConsistentAtLargeN) {
  const DensityMatrix truth = DensityMatrix::pure(Vector::Unit(4, 0));
  const CountsDataset data = simulate_dataset(truth, 10000, 1);
  const ModelFit fit = fit_rank(data, 1);
  EXPECT_TRUE(fit.converged);
  EXPECT_LT(hs_distance_sq(fit.state(), truth), 5e-3);
}

TEST(FitRank, LoglikMatchesReportedState) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const CountsDataset data = simulate_dataset(random_state(2, 2, seed), 50, seed);
    for (int r = 1; r <= 4; ++r) {
      const ModelFit fit = fit_rank(data, r, {.seed = seed});
      EXPECT_NEAR(fit.loglik, log_likelihood(fit.state(), data), 1e-8);
      EXPECT_NEAR(fit.factor.frobenius_sq(), 1.0, 1e-12);
      EXPECT_EQ(fit.rank, r);
      EXPECT_EQ(fit.total_counts, data.total());
      EXPECT_EQ(fit.data_fingerprint, dataset_fingerprint(data));
      if (fit.converged) {
        EXPECT_LT(fit.grad_norm, fit.tolerance);
      }
    }
  }
}

TEST(FitRank, NestedMonotonicity) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const int k = 1 + static_cast<int>(seed % 3);
    const CountsDataset data = simulate_dataset(random_state(k, 2, seed), 30, seed);
    double prev = -std::numeric_limits<double>::infinity();
    std::optional<TrapezoidalFactor> warm;
    for (int r = 1; r <= std::min(4, pow2(k)); ++r) {
      FitOptions opt;
      opt.seed = seed;
      opt.warm_start = warm;
      const ModelFit fit = fit_rank(data, r, opt);
      EXPECT_GE(fit.loglik, prev - 1e-6) << "k=" << k << " r=" << r;
      prev = fit.loglik;
      warm = fit.factor;
    }
  }
}

TEST(FitRank, RowPhaseGaugeLeavesLoglikUnchanged) {
  const CountsDataset data = simulate_dataset(random_state(2, 2, 3), 40, 3);
  const ModelFit fit = fit_rank(data, 2);
  Matrix t = fit.factor.matrix();
  t.row(0) *= std::polar(1.0, 1.1);
  t.row(1) *= std::polar(1.0, -0.4);
  EXPECT_NEAR(log_likelihood(TrapezoidalFactor(t), data), fit.loglik, 1e-8);
}

TEST(FitRank, Deterministic) {
  const CountsDataset data = simulate_dataset(random_state(3, 2, 5), 20, 5);
  FitOptions opt;
  opt.seed = 77;
  const ModelFit a = fit_rank(data, 2, opt);
  opt.parallel = true;
  const ModelFit b = fit_rank(data, 2, opt);
  EXPECT_EQ(a.factor.matrix(), b.factor.matrix());
  EXPECT_EQ(a.loglik, b.loglik);
  EXPECT_EQ(a.best_start, b.best_start);
}

TEST(FitRank, Errors) {
  const CountsDataset data = simulate_dataset(DensityMatrix::maximally_mixed(2), 10, 1);
  EXPECT_THROW(fit_rank(data, 0), ValidationError);
  EXPECT_THROW(fit_rank(data, 3), ValidationError);
  CountsDataset partial(2);
  partial.set_counts(Setting::parse("xx"), {1, 2, 3, 4});
  EXPECT_THROW(fit_rank(partial, 1), ValidationError);
}

// Log-likelihood of a one-qubit Bloch vector: sum_d N(+|d) log((1+r_d)/2) + N(-|d) log((1-r_d)/2).
double bloch_loglik(const CountsDataset& data, const Eigen::Vector3d& r) {
  double l = 0.0;
  for (int d = 0; d < 3; ++d) {
    const auto c = data.counts(static_cast<std::size_t>(d));
    const double p = 0.5 * (1.0 + r(d)), m = 0.5 * (1.0 - r(d));
    if (c[0] > 0) l += static_cast<double>(c[0]) * std::log(p);
    if (c[1] > 0) l += static_cast<double>(c[1]) * std::log(m);
  }
  return l;
}

// Coarse-to-fine search over the Bloch ball. The objective is concave, so
// refining around the coarse maximizer reaches the global one.
Eigen::Vector3d grid_argmax(const CountsDataset& data) {
  Eigen::Vector3d best = Eigen::Vector3d::Zero();
  double best_l = bloch_loglik(data, best);
  for (double step : {0.05, 0.005}) {
    const Eigen::Vector3d centre = best;
    const double half = step == 0.05 ? 1.0 : 0.1;
    const int m = static_cast<int>(std::lround(half / step));
    for (int i = -m; i <= m; ++i)
      for (int j = -m; j <= m; ++j)
        for (int k = -m; k <= m; ++k) {
          Eigen::Vector3d r = step == 0.05 ? Eigen::Vector3d(i * step, j * step, k * step)
                                           : Eigen::Vector3d(centre + step * Eigen::Vector3d(i, j, k));
          // Lattice points outside the ball stand in for the sphere by radial projection.
          if (r.squaredNorm() > 1.0) r.normalize();
          const double l = bloch_loglik(data, r);
          if (l > best_l) {
            best_l = l;
            best = r;
          }
        }
  }
  return best;
}

Eigen::Vector3d bloch_vector(const DensityMatrix& rho) {
  const auto c = pauli_expand(rho.matrix());
  return std::sqrt(2.0) * Eigen::Vector3d(c[1], c[2], c[3]);
}

TEST(FitRank, OneQubitAgreesWithBlochGridSearch) {
  const std::vector<Matrix> truths = {bloch_state(0.3, -0.2, 0.5), bloch_state(0.7, 0.6, 0.1),
                                      bloch_state(0.0, 0.0, 1.0), bloch_state(-0.1, 0.05, 0.0)};
  for (std::size_t t = 0; t < truths.size(); ++t) {
    const CountsDataset data = simulate_dataset(DensityMatrix(truths[t]), 40, t + 1);
    const ModelFit fit = fit_rank(data, 2);
    const Eigen::Vector3d grid = grid_argmax(data);
    const Eigen::Vector3d got = bloch_vector(fit.state());
    EXPECT_LE((got - grid).cwiseAbs().maxCoeff(), 0.005 + 1e-9) << "truth " << t;
    EXPECT_GE(fit.loglik, bloch_loglik(data, grid) - 1e-9);
  }
}

TEST(FitRank, RankDeficientEstimatesFromPureStates) {
  const Vector psi = haar_random_vector(1, 11);
  const DensityMatrix truth = DensityMatrix::pure(psi);
  int deficient = 0;
  for (std::uint64_t rep = 0; rep < 100; ++rep) {
    const ModelFit fit = fit_rank(simulate_dataset(truth, 50, rep), 2, {.seed = rep});
    if (fit.state().eigenvalues()(1) < 0.02) ++deficient;
  }
  EXPECT_GT(deficient, 50);
}

TEST(FitFullIterative, ConvergesToMixedState) {
  const CountsDataset data = simulate_dataset(DensityMatrix::maximally_mixed(2), 20000, 4);
  const IterativeFit fit = fit_full_iterative(data);
  EXPECT_LT((fit.state.matrix() - Matrix::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff(), 1e-2);
}

TEST(FitFullIterative, NeverBeatsFullRankScan) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const CountsDataset data = simulate_dataset(random_state(2, 3, seed), 60, seed);
    const IterativeFit it = fit_full_iterative(data);
    const ModelFit full = fit_rank(data, 4, {.seed = seed});
    EXPECT_LE(it.loglik, full.loglik + 1e-4);
    EXPECT_NEAR(it.loglik, log_likelihood(it.state, data), 1e-8);
  }
}

TEST(FitFullIterative, OneStepKeepsUnitTrace) {
  const CountsDataset data = simulate_dataset(random_state(2, 1, 2), 30, 2);
  const IterativeFit fit = fit_full_iterative(data, 1);
  EXPECT_EQ(fit.iterations, 1);
  EXPECT_NEAR(fit.state.matrix().trace().real(), 1.0, 1e-12);
}

TEST(NaiveEstimate, TwoQubitCorrelationFormula) {
  CountsDataset data(2);
  for (std::size_t d = 0; d < 9; ++d) data.set_counts(d, {5, 5, 5, 5});
  const std::int64_t a = 9, c = 4, e = 2, b = 5;  // N(++), N(+-), N(-+), N(--)
  data.set_counts(Setting::parse("xz"), {a, c, e, b});
  const double n = static_cast<double>(a + b + c + e);
  const PauliCoefficients coeffs = naive_coefficients(data);
  EXPECT_NEAR(coeffs.at("xz"), (a + b - c - e) / (2.0 * n), 1e-15);
  EXPECT_NEAR(coeffs.at("x0"), (a + c - e - b) / (2.0 * n), 1e-15);
  EXPECT_NEAR(coeffs.at("00"), 0.5, 1e-15);
}

TEST(NaiveEstimate, EqualCountsGiveMaximallyMixed) {
  for (int k = 1; k <= 3; ++k) {
    CountsDataset data(k);
    for (std::size_t d = 0; d < pow3(k); ++d)
      data.set_counts(d, std::vector<std::int64_t>(static_cast<std::size_t>(pow2(k)), 3));
    EXPECT_LT((naive_estimate(data) - Matrix::Identity(pow2(k), pow2(k)) / pow2(k)).norm(), 1e-14);
  }
}

TEST(NaiveEstimate, Unbiased) {
  const DensityMatrix rho = random_state(2, 2, 21);
  const auto truth = pauli_expand(rho.matrix());
  const int reps = 10000;
  const std::size_t words = truth.values().size();
  std::vector<double> sum(words, 0.0), sum_sq(words, 0.0);
  for (int rep = 0; rep < reps; ++rep) {
    const auto c = naive_coefficients(simulate_dataset(rho, 10, static_cast<std::uint64_t>(rep)));
    for (std::size_t i = 0; i < words; ++i) {
      sum[i] += c[i];
      sum_sq[i] += c[i] * c[i];
    }
  }
  for (std::size_t i = 1; i < words; ++i) {
    const double mean = sum[i] / reps;
    const double var = sum_sq[i] / reps - mean * mean;
    EXPECT_LT(std::abs(mean - truth[i]), 3.0 * std::sqrt(var / reps) + 1e-12) << pauli_word_str(2, i);
  }
}

TEST(NaiveEstimate, SelfadjointUnitTrace) {
  const Matrix m = naive_estimate(simulate_dataset(random_state(3, 1, 4), 5, 4));
  EXPECT_LT((m - m.adjoint()).norm(), 1e-14);
  EXPECT_NEAR(m.trace().real(), 1.0, 1e-14);
}

TEST(FitChart, PinnedCoordinatesStayFixed) {
  const DensityMatrix truth(bloch_state(0.2, 0.3, -0.1));
  const CountsDataset data = simulate_dataset(truth, 200, 8);
  const CholeskyChart chart(truth, 2);
  const RealVector start = chart.reference();
  const ChartFit free = fit_chart(data, chart, start);
  const ChartFit pinned = fit_chart(data, chart, start, {false, false, true});
  EXPECT_TRUE(free.converged);
  EXPECT_TRUE(pinned.converged);
  EXPECT_EQ(pinned.theta(2), start(2));
  EXPECT_GE(free.loglik, pinned.loglik - 1e-9);
  // The unconstrained chart optimum is the full-rank MLE.
  EXPECT_NEAR(free.loglik, fit_rank(data, 2).loglik, 1e-6);
  EXPECT_NEAR(free.loglik, log_likelihood(DensityMatrix(chart.state(free.theta)), data), 1e-8);
}

}  // namespace
}  // namespace qtomo
