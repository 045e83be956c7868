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
#include <functional>
#include <span>
#include <vector>

namespace qtomo {

// Chi-square distribution with `df` degrees of freedom (df >= 1).
class ChiSquare {
 public:
  explicit ChiSquare(double df);

  double df() const { return df_; }
  double cdf(double x) const;
  // Upper tail 1 - cdf(x), accurate for large x.
  double survival(double x) const;
  // Inverse cdf; requires 0 < q < 1.
  double quantile(double q) const;
  // `count` independent draws, deterministic in `seed`.
  std::vector<double> sample(std::size_t count, std::uint64_t seed) const;

 private:
  double df_;
};

struct KsResult {
  double statistic = 0.0;  // sup |F_n - F|
  double p_value = 0.0;
};

// One-sample Kolmogorov-Smirnov test of `samples` against a continuous cdf,
// asymptotic Kolmogorov distribution with the Stephens small-sample
// correction.
KsResult ks_test(std::span<const double> samples, const std::function<double(double)>& cdf);

// Kolmogorov survival function Q(lambda) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2).
double kolmogorov_survival(double lambda);

}  // namespace qtomo
