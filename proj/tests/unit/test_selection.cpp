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

#include "qtomo/errors.hpp"
#include "qtomo/selection.hpp"
#include "qtomo/states.hpp"
#include "qtomo/stats.hpp"

namespace qtomo {
namespace {

TEST(ModelDim, Examples) {
  EXPECT_EQ(model_dim(16, 1), 30);
  EXPECT_EQ(model_dim(16, 1), 2 * (16 - 1));
  EXPECT_EQ(model_dim(16, 16), 255);
  EXPECT_EQ(model_dim(16, 3) - model_dim(16, 2), 27);
  EXPECT_EQ(model_dim(2, 2), 3);
  EXPECT_THROW(model_dim(4, 0), ValidationError);
  EXPECT_THROW(model_dim(4, 5), ValidationError);
}

ModelFit fake_fit(int rank, double loglik, bool converged = true, int dim = 2) {
  ModelFit f;
  f.rank = rank;
  f.factor = TrapezoidalFactor::identity(rank, std::max(rank, dim));
  f.loglik = loglik;
  f.converged = converged;
  return f;
}

CountsDataset uniform_data(int k, std::int64_t n) {
  return simulate_dataset(DensityMatrix::maximally_mixed(pow2(k)), n, 1);
}

TEST(InformationCriteria, BicStepForFourQubits) {
  const CountsDataset data = uniform_data(4, 100);
  ASSERT_EQ(data.total(), 8100);
  const auto c2 = information_criteria(fake_fit(2, 0.0, true, 16), data);
  const auto c3 = information_criteria(fake_fit(3, 0.0, true, 16), data);
  EXPECT_NEAR(c3.bic - c2.bic, 27.0 * std::log(8100.0), 1e-9);
  // The printed 242.98 is the value truncated to two decimals (242.9897...).
  EXPECT_EQ(std::floor((c3.bic - c2.bic) * 100.0) / 100.0, 242.98);
}

TEST(InformationCriteria, PlugIn) {
  const CountsDataset data = uniform_data(1, 10);
  const auto c = information_criteria(fake_fit(1, 0.0), data);
  EXPECT_DOUBLE_EQ(c.aic, 4.0);
  EXPECT_DOUBLE_EQ(c.bic, 2.0 * std::log(30.0));
  EXPECT_FALSE(c.flagged);
  EXPECT_TRUE(information_criteria(fake_fit(1, 0.0, false), data).flagged);
}

TEST(InformationCriteria, DifferenceIdentity) {
  const CountsDataset data = simulate_dataset(random_state(2, 2, 3), 37, 3);
  for (int r = 1; r <= 4; ++r) {
    const auto c = information_criteria(fake_fit(r, -123.456 * r, true, 4), data);
    EXPECT_NEAR(c.aic - c.bic, model_dim(4, r) * (2.0 - std::log(static_cast<double>(data.total()))), 1e-9);
  }
}

TEST(ScanRanks, SelectedRanksMinimizeCriteria) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const CountsDataset data = simulate_dataset(random_significant_state(2, 2, seed), 100, seed);
    ScanOptions opt;
    opt.fit.seed = seed;
    const RankScan scan = scan_ranks(data, opt);
    ASSERT_TRUE(scan.error.empty());
    ASSERT_FALSE(scan.entries.empty());
    EXPECT_EQ(scan.stop_rank, static_cast<int>(scan.entries.size()));
    for (const RankEntry& e : scan.entries) {
      EXPECT_GE(e.aic, scan.entries[static_cast<std::size_t>(scan.selected_rank_aic - 1)].aic);
      EXPECT_GE(e.bic, scan.entries[static_cast<std::size_t>(scan.selected_rank_bic - 1)].bic);
      const auto c = information_criteria(scan.fit(e.rank), data);
      EXPECT_EQ(c.aic, e.aic);
      EXPECT_EQ(c.bic, e.bic);
    }
    for (std::size_t i = 1; i < scan.entries.size(); ++i) {
      EXPECT_GE(scan.entries[i].loglik, scan.entries[i - 1].loglik - 1e-6);
      EXPECT_GE(log_likelihood_ratio(scan.fits[i], scan.fits[i - 1]), -1e-6);
    }
  }
}

TEST(ScanRanks, EarlyStopNeedsBothCriteriaToRise) {
  // A pure two-qubit state: both criteria rise after rank 1, so the scan stops
  // after rank 3 with patience 2.
  const CountsDataset data = simulate_dataset(random_state(2, 1, 7), 200, 7);
  const RankScan scan = scan_ranks(data);
  EXPECT_EQ(scan.selected_rank_bic, 1);
  EXPECT_EQ(scan.stop_rank, 3);
  ScanOptions capped;
  capped.max_rank = 2;
  EXPECT_EQ(scan_ranks(data, capped).stop_rank, 2);
}

TEST(ScanRanks, BicPicksRankOneForPureQubit) {
  const DensityMatrix truth = DensityMatrix::pure(haar_random_vector(1, 5));
  int correct = 0;
  const int reps = 200;
  for (int rep = 0; rep < reps; ++rep) {
    ScanOptions opt;
    opt.fit.seed = static_cast<std::uint64_t>(rep);
    if (scan_ranks(simulate_dataset(truth, 50, static_cast<std::uint64_t>(rep)), opt).selected_rank_bic == 1)
      ++correct;
  }
  EXPECT_GE(correct, static_cast<int>(0.98 * reps));
}

TEST(LikelihoodRatio, IdenticalFitsGiveZero) {
  const ModelFit f = fake_fit(2, -50.0, true, 4);
  EXPECT_EQ(log_likelihood_ratio(f, f), 0.0);
  EXPECT_DOUBLE_EQ(log_likelihood_ratio(fake_fit(3, -40.0, true, 4), f), 20.0);
  EXPECT_THROW(log_likelihood_ratio(f, fake_fit(3, -40.0, true, 4)), ValidationError);
  ModelFit other = fake_fit(3, -40.0, true, 4);
  other.data_fingerprint = 99;
  EXPECT_THROW(log_likelihood_ratio(other, f), ValidationError);
}

TEST(LikelihoodRatio, TracksMeasurementKl) {
  // Lambda(2 vs 1) / (2n) against K(P_rho | P_rho1) at the fitted rank-1 state.
  const DensityMatrix truth = random_significant_state(4, 2, 3);
  double lambda_sum = 0.0, kl_sum = 0.0;
  const int reps = 5;
  for (int rep = 0; rep < reps; ++rep) {
    const CountsDataset data = simulate_dataset(truth, 100, 40 + static_cast<std::uint64_t>(rep));
    ScanOptions opt;
    opt.max_rank = 2;
    opt.stop_after_increases = 3;
    opt.fit.seed = static_cast<std::uint64_t>(rep);
    const RankScan scan = scan_ranks(data, opt);
    lambda_sum += log_likelihood_ratio(scan.fit(2), scan.fit(1)) / (2.0 * 100.0);
    kl_sum += kl_measurement(truth, scan.fit(1).state());
  }
  EXPECT_NEAR(lambda_sum / reps, kl_sum / reps, 0.15 * kl_sum / reps);
}

}  // namespace
}  // namespace qtomo
