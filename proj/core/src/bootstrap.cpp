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

#include <algorithm>
#include <cmath>
#include <limits>

#include "qtomo/chi_square.hpp"
#include "qtomo/errors.hpp"
#include "qtomo/parallel.hpp"
#include "qtomo/rng.hpp"
#include "qtomo/stats.hpp"

namespace qtomo {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void fill_asymptotic(TestResult& r) {
  if (r.df >= 1) {
    const ChiSquare chi2(r.df);
    r.p_value = std::isinf(r.statistic) ? 0.0 : chi2.survival(r.statistic);
    r.chi2_threshold = chi2.quantile(1.0 - r.alpha);
  } else {
    r.p_value = kNaN;
    r.chi2_threshold = kNaN;
  }
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
}

}  // namespace

double empirical_quantile(std::vector<double> values, double level) {
  if (values.empty()) throw ValidationError("empirical quantile of an empty sample");
  if (!(level > 0.0 && level < 1.0)) throw ValidationError("quantile level must lie in (0, 1)");
  const auto n = values.size();
  // Guard against level * n landing a hair above an integer.
  auto rank = static_cast<std::size_t>(std::ceil(level * static_cast<double>(n) - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, n);
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(rank - 1), values.end());
  return values[rank - 1];
}

TestResult pearson_test(const CountsDataset& data, const ModelFit& fit, double alpha) {
  check_alpha(alpha);
  if (fit.data_fingerprint != dataset_fingerprint(data)) throw ValidationError("fit was not produced from this dataset");
  TestResult r;
  r.method = TestMethod::kAsymptotic;
  r.alpha = alpha;
  r.df = pearson_df(data.qubits(), fit.rank);
  r.statistic = pearson_statistic(data, all_outcome_probabilities(fit.factor));
  fill_asymptotic(r);
  if (r.df < 1) throw NumericalError("asymptotic Pearson test needs df >= 1; use the bootstrap");
  r.threshold = r.chi2_threshold;
  r.reject = r.statistic > r.threshold;
  r.fit = fit;
  return r;
}

TestResult bootstrap_pearson(const CountsDataset& data, const ModelFit& fit, const BootstrapOptions& options) {
  check_alpha(options.alpha);
  if (options.samples < 1) throw ValidationError("bootstrap needs at least one sample");
  data.require_complete();
  if (fit.data_fingerprint != dataset_fingerprint(data)) throw ValidationError("fit was not produced from this dataset");
  if (!std::isfinite(fit.loglik)) throw NumericalError("outer fit failed; cannot bootstrap");

  const int k = data.qubits();
  const std::vector<double> probs = all_outcome_probabilities(fit.factor);
  std::vector<std::int64_t> reps(pow3(k));
  for (std::size_t d = 0; d < reps.size(); ++d) reps[d] = data.repetitions(d);

  const auto count = static_cast<std::size_t>(options.samples);
  std::vector<double> stats(count, kNaN);
  parallel_for(
      count,
      [&](std::size_t b) {
        const CountsDataset sim = simulate_from_probabilities(k, probs, reps, derive_seed(options.seed, {b, 0}));
        FitOptions fo = options.fit;
        fo.warm_start = fit.factor;
        fo.seed = derive_seed(options.seed, {b, 1});
        fo.parallel = false;
        try {
          const ModelFit refit = fit_rank(sim, fit.rank, fo);
          if (!std::isfinite(refit.loglik)) return;
          const double t = pearson_statistic(sim, all_outcome_probabilities(refit.factor));
          if (std::isfinite(t)) stats[b] = t;
        } catch (const NumericalError&) {
        }
      },
      options.threads);

  TestResult r;
  r.method = TestMethod::kBootstrap;
  r.alpha = options.alpha;
  r.df = pearson_df(k, fit.rank);
  r.statistic = pearson_statistic(data, probs);
  r.fit = fit;
  std::vector<double> kept;
  kept.reserve(count);
  for (double t : stats) {
    if (std::isnan(t))
      ++r.dropped;
    else
      kept.push_back(t);
  }
  if (static_cast<double>(r.dropped) > options.max_drop_fraction * static_cast<double>(count))
    throw NumericalError("bootstrap aborted: " + std::to_string(r.dropped) + " of " + std::to_string(count) +
                         " replicate fits failed");
  r.bootstrap_samples = stats;
  r.threshold = empirical_quantile(kept, 1.0 - options.alpha);
  r.reject = r.statistic > r.threshold;
  fill_asymptotic(r);
  return r;
}

TestResult bootstrap_pearson(const CountsDataset& data, int rank, const BootstrapOptions& options) {
  FitOptions fo = options.fit;
  fo.seed = derive_seed(options.seed, {0xb007ULL});
  const ModelFit fit = fit_rank(data, rank, fo);
  return bootstrap_pearson(data, fit, options);
}

}  // namespace qtomo
