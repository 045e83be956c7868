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

#include <string>
#include <vector>

#include "qtomo/dataset.hpp"
#include "qtomo/inference.hpp"

namespace qtomo {

// Intrinsic dimension of rank-r states on C^d: 2dr - r^2 - 1.
int model_dim(int dim, int rank);

struct InformationCriteria {
  double aic = 0.0;
  double bic = 0.0;
  // Set when the underlying fit did not converge; values are still computed.
  bool flagged = false;
};

// AIC = -2l + 2p(d,r); BIC = -2l + p(d,r) log N_tot, with N_tot the total
// number of measurements in `data`.
InformationCriteria information_criteria(const ModelFit& fit, const CountsDataset& data);

struct RankEntry {
  int rank = 0;
  double loglik = 0.0;
  double aic = 0.0;
  double bic = 0.0;
  bool converged = false;
};

struct RankScan {
  std::vector<RankEntry> entries;
  std::vector<ModelFit> fits;
  int selected_rank_aic = 0;
  int selected_rank_bic = 0;
  int stop_rank = 0;
  // Non-empty when a rank failed; entries hold the ranks fitted before it.
  std::string error;

  const ModelFit& fit(int rank) const;
  bool has_rank(int rank) const { return rank >= 1 && rank <= static_cast<int>(fits.size()); }
};

struct ScanOptions {
  // Stop once both criteria have increased for this many consecutive ranks.
  int stop_after_increases = 2;
  // 0 means the full dimension 2^k.
  int max_rank = 0;
  // Fit options for every rank; the seed is re-derived per rank and each
  // rank is warm-started from the previous one.
  FitOptions fit;
};

// Fits ranks 1, 2, ... and selects the minimizer of each criterion (ties go
// to the smaller rank).
RankScan scan_ranks(const CountsDataset& data, const ScanOptions& options = {});

// Lambda = 2 (l_hi - l_lo) between nested fits of the same dataset.
double log_likelihood_ratio(const ModelFit& hi, const ModelFit& lo);

}  // namespace qtomo
