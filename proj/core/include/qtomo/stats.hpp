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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qtomo/charts.hpp"
#include "qtomo/dataset.hpp"
#include "qtomo/density_matrix.hpp"
#include "qtomo/inference.hpp"

namespace qtomo {

// Smallest cell probability fisher_information accepts.
inline constexpr double kFisherMinProbability = 1e-12;

// Per-repetition-set Fisher information of the product multinomial model
// (every setting measured once):
//   I_jk = sum_d sum_s dP_j(s|d) dP_k(s|d) / P(s|d).
// Throws NumericalError when some P(s|d) < kFisherMinProbability.
RealMatrix fisher_information(const Chart& chart, const RealVector& theta);
inline RealMatrix fisher_information(const Chart& chart) { return fisher_information(chart, chart.reference()); }

// G_jk = Tr(d_j rho d_k rho), the local Hilbert-Schmidt metric.
RealMatrix g_matrix(const Chart& chart, const RealVector& theta);
inline RealMatrix g_matrix(const Chart& chart) { return g_matrix(chart, chart.reference()); }

// Tr(G I^-1) / n. Throws NumericalError when I is singular.
double asymptotic_mse(const RealMatrix& g, const RealMatrix& fisher, double n);
double asymptotic_mse(const Chart& chart, double n);

// 2 (2^k - 1) / (3^k n): the pure-state quantum MSE bound.
double qmse_bound(int qubits, double n);

// Fisher information of the coarse-grained data that keeps only the
// empirical full parity of each setting:
//   I_jk = sum_d dm_j(d) dm_k(d) / (1 - m(d)^2),  m(d) = Tr(rho sigma_d).
// Throws NumericalError when some |m(d)| reaches 1.
RealMatrix coarse_fisher(const Chart& chart, const RealVector& theta);
inline RealMatrix coarse_fisher(const Chart& chart) { return coarse_fisher(chart, chart.reference()); }

// sum_d sum_s P_rho log(P_rho / P_tau); +inf when P_tau = 0 < P_rho.
double kl_measurement(const DensityMatrix& rho, const DensityMatrix& tau);

// Pearson statistic sum (N - E)^2 / E with E(s|d) = n(d) P(s|d). Cells with
// E = N = 0 contribute 0; E = 0 < N gives +inf.
double pearson_statistic(const CountsDataset& data, const DensityMatrix& rho);
double pearson_statistic(const CountsDataset& data, std::span<const double> probs);

// 3^k (2^k - 1) - p(2^k, r). May be zero or negative for large r.
int pearson_df(int qubits, int rank);

enum class TestMethod { kAsymptotic, kBootstrap };
std::string to_string(TestMethod m);

struct TestResult {
  double statistic = 0.0;
  int df = 0;
  // Upper-tail chi^2(df) probability of the statistic; NaN when df < 1.
  double p_value = 0.0;
  // Rejection threshold t_alpha used for the decision.
  double threshold = 0.0;
  bool reject = false;
  TestMethod method = TestMethod::kAsymptotic;
  double alpha = 0.05;
  // chi^2(df) (1 - alpha) quantile; NaN when df < 1.
  double chi2_threshold = 0.0;
  // Bootstrap replicate statistics in replicate order (bootstrap only).
  std::vector<double> bootstrap_samples;
  // Replicates whose refit failed (bootstrap only).
  int dropped = 0;
  ModelFit fit;
};

// Level-alpha Pearson test against the chi^2(df(r)) approximation.
TestResult pearson_test(const CountsDataset& data, const ModelFit& fit, double alpha = 0.05);

struct BootstrapOptions {
  int samples = 100;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  // Options for the outer fit and for every replicate refit. Replicates
  // warm-start from the outer fit.
  FitOptions fit;
  // Worker threads over replicates (0 = hardware concurrency).
  unsigned threads = 0;
  // Abort when more than this fraction of replicates fail.
  double max_drop_fraction = 0.2;
};

// (1 - alpha) empirical quantile: the ceil((1 - alpha) N)-th order statistic.
double empirical_quantile(std::vector<double> values, double level);

// Parametric bootstrap Pearson test at rank r: fit, simulate replicates from
// the fitted state with the same n(d), refit each, compare T(data) to the
// empirical (1 - alpha) quantile of the replicate statistics.
TestResult bootstrap_pearson(const CountsDataset& data, int rank, const BootstrapOptions& options = {});
// Same, reusing an existing rank-r fit of `data`.
TestResult bootstrap_pearson(const CountsDataset& data, const ModelFit& fit, const BootstrapOptions& options = {});

}  // namespace qtomo
