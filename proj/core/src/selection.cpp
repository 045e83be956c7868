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

#include "qtomo/selection.hpp"

#include <cmath>

#include "qtomo/errors.hpp"
#include "qtomo/rng.hpp"

namespace qtomo {

int model_dim(int dim, int rank) {
  if (dim < 1 || rank < 1 || rank > dim) throw ValidationError("model_dim needs 1 <= r <= d");
  return 2 * dim * rank - rank * rank - 1;
}

InformationCriteria information_criteria(const ModelFit& fit, const CountsDataset& data) {
  if (fit.factor.dim() != data.dim()) throw ValidationError("fit and dataset dimensions differ");
  const auto p = static_cast<double>(model_dim(data.dim(), fit.rank));
  const auto n_tot = static_cast<double>(data.total());
  if (!(n_tot > 0.0)) throw ValidationError("dataset has no counts");
  InformationCriteria ic;
  ic.aic = -2.0 * fit.loglik + 2.0 * p;
  ic.bic = -2.0 * fit.loglik + p * std::log(n_tot);
  ic.flagged = !fit.converged;
  return ic;
}

const ModelFit& RankScan::fit(int rank) const {
  if (!has_rank(rank)) throw ValidationError("rank was not fitted in this scan");
  return fits[static_cast<std::size_t>(rank - 1)];
}

RankScan scan_ranks(const CountsDataset& data, const ScanOptions& options) {
  data.require_complete();
  const int dim = data.dim();
  const int max_rank = options.max_rank == 0 ? dim : options.max_rank;
  if (max_rank < 1 || max_rank > dim) throw ValidationError("max_rank out of range");
  if (options.stop_after_increases < 1) throw ValidationError("stop_after_increases must be >= 1");

  RankScan scan;
  int aic_increases = 0;
  int bic_increases = 0;
  for (int r = 1; r <= max_rank; ++r) {
    FitOptions fo = options.fit;
    fo.seed = derive_seed(options.fit.seed, {static_cast<std::uint64_t>(r)});
    if (!scan.fits.empty()) fo.warm_start = scan.fits.back().factor;
    ModelFit fit = fit_rank(data, r, fo);
    if (!std::isfinite(fit.loglik)) {
      scan.error = "rank " + std::to_string(r) + " fit diverged";
      break;
    }
    const InformationCriteria ic = information_criteria(fit, data);
    RankEntry e{r, fit.loglik, ic.aic, ic.bic, fit.converged};
    if (!scan.entries.empty()) {
      const RankEntry& prev = scan.entries.back();
      aic_increases = e.aic > prev.aic ? aic_increases + 1 : 0;
      bic_increases = e.bic > prev.bic ? bic_increases + 1 : 0;
    }
    scan.entries.push_back(e);
    scan.fits.push_back(std::move(fit));
    scan.stop_rank = r;
    if (aic_increases >= options.stop_after_increases && bic_increases >= options.stop_after_increases) break;
  }
  if (scan.entries.empty()) throw NumericalError(scan.error);
  scan.selected_rank_aic = scan.entries.front().rank;
  scan.selected_rank_bic = scan.entries.front().rank;
  double best_aic = scan.entries.front().aic;
  double best_bic = scan.entries.front().bic;
  for (const RankEntry& e : scan.entries) {
    if (e.aic < best_aic) {
      best_aic = e.aic;
      scan.selected_rank_aic = e.rank;
    }
    if (e.bic < best_bic) {
      best_bic = e.bic;
      scan.selected_rank_bic = e.rank;
    }
  }
  return scan;
}

double log_likelihood_ratio(const ModelFit& hi, const ModelFit& lo) {
  if (hi.factor.dim() != lo.factor.dim() || hi.data_fingerprint != lo.data_fingerprint)
    throw ValidationError("log-likelihood ratio needs fits of the same dataset");
  if (hi.rank < lo.rank) throw ValidationError("log-likelihood ratio needs hi.rank >= lo.rank");
  return 2.0 * (hi.loglik - lo.loglik);
}

}  // namespace qtomo
