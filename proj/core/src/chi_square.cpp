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

#include "qtomo/chi_square.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <boost/math/distributions/chi_squared.hpp>

#include "qtomo/errors.hpp"
#include "qtomo/rng.hpp"

namespace qtomo {

ChiSquare::ChiSquare(double df) : df_(df) {
  if (!(df >= 1.0) || !std::isfinite(df)) throw ValidationError("chi-square needs df >= 1");
}

double ChiSquare::cdf(double x) const {
  if (std::isnan(x)) throw ValidationError("chi-square cdf of NaN");
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return boost::math::cdf(boost::math::chi_squared_distribution<double>(df_), x);
}

double ChiSquare::survival(double x) const {
  if (std::isnan(x)) throw ValidationError("chi-square survival of NaN");
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared_distribution<double>(df_), x));
}

double ChiSquare::quantile(double q) const {
  if (!(q > 0.0 && q < 1.0)) throw ValidationError("chi-square quantile needs 0 < q < 1");
  return boost::math::quantile(boost::math::chi_squared_distribution<double>(df_), q);
}

std::vector<double> ChiSquare::sample(std::size_t count, std::uint64_t seed) const {
  Rng rng = make_rng(seed, {0xc41ULL});
  std::chi_squared_distribution<double> dist(df_);
  std::vector<double> out(count);
  for (double& v : out) v = dist(rng);
  return out;
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 0.2) {
    // Use the theta-function form, which converges fast for small lambda:
    // P(K <= l) = sqrt(2 pi)/l sum_j exp(-(2j-1)^2 pi^2 / (8 l^2)).
    const double pi = 3.14159265358979323846;
    double acc = 0.0;
    for (int j = 1; j <= 20; ++j) {
      const double t = (2.0 * j - 1.0) * pi / lambda;
      acc += std::exp(-t * t / 8.0);
    }
    return std::clamp(1.0 - std::sqrt(2.0 * pi) / lambda * acc, 0.0, 1.0);
  }
  double acc = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    acc += (j % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * acc, 0.0, 1.0);
}

KsResult ks_test(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw ValidationError("KS test needs samples");
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  const auto n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max(d, std::max(f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f));
  }
  const double sqrt_n = std::sqrt(n);
  KsResult r;
  r.statistic = d;
  r.p_value = kolmogorov_survival((sqrt_n + 0.12 + 0.11 / sqrt_n) * d);
  return r;
}

}  // namespace qtomo
