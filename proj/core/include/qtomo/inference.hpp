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
#include "qtomo/pauli.hpp"

namespace qtomo {

// Maximum-likelihood fit at a fixed rank.
struct ModelFit {
  int rank = 0;
  TrapezoidalFactor factor = TrapezoidalFactor::identity(1, 2);  // unit Frobenius norm
  double loglik = 0.0;     // l(state_from_factor(factor)), unclamped
  bool converged = false;  // grad_norm < tolerance
  double tolerance = 0.0;  // stationarity tolerance the fit was held to
  double grad_norm = 0.0;  // ||dl/dtheta|| over raw factor coordinates
  int iterations = 0;      // optimizer iterations of the winning start
  int restarts_used = 0;   // number of starts polished
  int best_start = 0;      // index of the winning start (0 = warm start if any)
  std::string status;      // optimizer stop reason of the winning start
  std::int64_t total_counts = 0;
  std::uint64_t data_fingerprint = 0;  // dataset_fingerprint of the fitted data

  DensityMatrix state() const;
};

struct FitOptions {
  int restarts = 5;
  int max_iterations = 2000;
  // Stationarity tolerance per count: a fit is converged when
  // ||dl/dtheta|| < grad_tol * max(1, N_tot).
  double grad_tol = 1e-6;
  // Stop when one step changes -l by at most rel_tol * max(1, |l|).
  double rel_tol = 1e-14;
  double prob_floor = 1e-12;
  // Magnitude of the extra row appended to a rank r-1 warm start.
  double warm_pad = 1e-3;
  // Rank r-1 (padded) or rank r starting factor.
  std::optional<TrapezoidalFactor> warm_start;
  std::uint64_t seed = 0;
  // Polish starts on worker threads.
  bool parallel = false;
};

// Multi-start fixed-rank MLE over r x 2^k trapezoidal factors with
// rho = T^dagger T / Tr(T^dagger T). Each start is polished by L-BFGS; the
// highest-likelihood start wins (ties: lowest start index). Never throws for
// optimizer trouble: a fit whose starts all failed comes back with
// converged = false.
ModelFit fit_rank(const CountsDataset& data, int rank, const FitOptions& options = {});

struct IterativeFit {
  DensityMatrix state;
  double loglik;
  int iterations;
};

// Full-rank MLE by the fixed-point iteration rho <- R rho R / Tr(R rho R),
// R = sum_{s,d} N(s|d) / P(s|d) P_s^d, from the maximally mixed state. Stops
// when l improves by less than `tol` or after `max_iter` steps.
IterativeFit fit_full_iterative(const CountsDataset& data, int max_iter = 1000, double tol = 1e-10);

// Linear-inversion Pauli coefficients: each word i is read off the single
// setting with d_j = i_j where i_j != 0 and d_j = z elsewhere.
PauliCoefficients naive_coefficients(const CountsDataset& data);
// pauli_reconstruct(naive_coefficients(data)); selfadjoint, unit trace, not
// necessarily positive.
Matrix naive_estimate(const CountsDataset& data);

struct ChartFit {
  RealVector theta;
  double loglik = 0.0;
  bool converged = false;
  double grad_norm = 0.0;
  int iterations = 0;
};

// MLE within a chart's coordinates, starting from `start`. Coordinates with
// `pinned[j] = true` stay at their starting value (submodel fits).
ChartFit fit_chart(const CountsDataset& data, const Chart& chart, const RealVector& start,
                   const std::vector<bool>& pinned = {}, const FitOptions& options = {});

}  // namespace qtomo
