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

#include "qtomo/stats.hpp"

#include <bit>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "qtomo/errors.hpp"
#include "qtomo/pauli.hpp"
#include "qtomo/selection.hpp"

namespace qtomo {
namespace {

int chart_qubits(const Chart& chart) {
  const int d = chart.dim();
  if (d < 2 || !std::has_single_bit(static_cast<unsigned>(d)))
    throw ValidationError("chart dimension must be 2^k");
  return std::countr_zero(static_cast<unsigned>(d));
}

// Per setting: probabilities (length 2^k) and their derivatives (2^k x p).
struct SettingDerivatives {
  RealVector p;
  RealMatrix dp;
};

template <typename Fn>
void for_each_setting(const Chart& chart, const RealVector& theta, Fn&& fn) {
  const int k = chart_qubits(chart);
  const Matrix rho = chart.state(theta);
  const std::vector<Matrix> jac = chart.jacobian(theta);
  const int d = chart.dim();
  const int p = static_cast<int>(jac.size());
  SettingDerivatives sd{RealVector(d), RealMatrix(d, p)};
  for (const Setting& setting : all_settings(k)) {
    const Matrix b = setting_basis_matrix(setting);
    const Matrix bh = b.adjoint();
    sd.p = (bh * rho * b).diagonal().real();
    for (int j = 0; j < p; ++j) sd.dp.col(j) = (bh * jac[static_cast<std::size_t>(j)] * b).diagonal().real();
    fn(sd);
  }
}

// Sign of the full parity of outcome s: (-1)^popcount(s).
RealVector parity_signs(int dim) {
  RealVector v(dim);
  for (int s = 0; s < dim; ++s) v(s) = (std::popcount(static_cast<unsigned>(s)) % 2 == 0) ? 1.0 : -1.0;
  return v;
}

}  // namespace

RealMatrix fisher_information(const Chart& chart, const RealVector& theta) {
  const int p = chart.parameters();
  RealMatrix info = RealMatrix::Zero(p, p);
  for_each_setting(chart, theta, [&](const SettingDerivatives& sd) {
    if (sd.p.minCoeff() < kFisherMinProbability)
      throw NumericalError("singular model: a cell probability is below 1e-12");
    const RealMatrix w = sd.p.cwiseInverse().asDiagonal() * sd.dp;
    info.noalias() += sd.dp.transpose() * w;
  });
  return 0.5 * (info + info.transpose());
}

RealMatrix g_matrix(const Chart& chart, const RealVector& theta) {
  const std::vector<Matrix> jac = chart.jacobian(theta);
  const int p = static_cast<int>(jac.size());
  RealMatrix g(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = i; j < p; ++j) {
      // Tr(A B) = sum_ab A_ab B_ba = sum_ab conj(A_ba) B_ba for selfadjoint A.
      const double v = jac[static_cast<std::size_t>(i)].cwiseProduct(jac[static_cast<std::size_t>(j)].transpose()).sum().real();
      g(i, j) = v;
      g(j, i) = v;
    }
  }
  return g;
}

double asymptotic_mse(const RealMatrix& g, const RealMatrix& fisher, double n) {
  if (!(n > 0.0)) throw ValidationError("asymptotic_mse needs n > 0");
  if (g.rows() != fisher.rows() || g.cols() != fisher.cols() || fisher.rows() != fisher.cols())
    throw ValidationError("G and Fisher matrices must be square and of equal size");
  Eigen::SelfAdjointEigenSolver<RealMatrix> eig(fisher);
  const RealVector& lambda = eig.eigenvalues();
  if (lambda.size() == 0) throw ValidationError("empty Fisher matrix");
  if (!(lambda(0) > 1e-12 * std::max(1.0, lambda(lambda.size() - 1))))
    throw NumericalError("singular Fisher information");
  const RealMatrix& v = eig.eigenvectors();
  const RealMatrix gv = v.transpose() * g * v;
  double tr = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) tr += gv(i, i) / lambda(i);
  return tr / n;
}

double asymptotic_mse(const Chart& chart, double n) {
  const RealVector theta = chart.reference();
  return asymptotic_mse(g_matrix(chart, theta), fisher_information(chart, theta), n);
}

double qmse_bound(int qubits, double n) {
  if (qubits < 1) throw ValidationError("qmse_bound needs k >= 1");
  if (!(n >= 1.0)) throw ValidationError("qmse_bound needs n >= 1");
  return 2.0 * (std::ldexp(1.0, qubits) - 1.0) / (std::pow(3.0, qubits) * n);
}

RealMatrix coarse_fisher(const Chart& chart, const RealVector& theta) {
  const int p = chart.parameters();
  const RealVector sign = parity_signs(chart.dim());
  RealMatrix info = RealMatrix::Zero(p, p);
  for_each_setting(chart, theta, [&](const SettingDerivatives& sd) {
    const double m = sign.dot(sd.p);
    const double var = 1.0 - m * m;
    if (!(var > 1e-12)) throw NumericalError("singular model: a full parity has |m| = 1");
    const RealVector dm = sd.dp.transpose() * sign;
    info.noalias() += dm * dm.transpose() / var;
  });
  return info;
}

double kl_measurement(const DensityMatrix& rho, const DensityMatrix& tau) {
  if (rho.dim() != tau.dim()) throw ValidationError("kl_measurement: dimension mismatch");
  const auto pr = all_outcome_probabilities(rho);
  const auto pt = all_outcome_probabilities(tau);
  double kl = 0.0;
  for (std::size_t i = 0; i < pr.size(); ++i) {
    const double a = std::max(pr[i], 0.0);
    if (a == 0.0) continue;
    const double b = std::max(pt[i], 0.0);
    if (b == 0.0) return std::numeric_limits<double>::infinity();
    kl += a * std::log(a / b);
  }
  return std::max(kl, 0.0);
}

double pearson_statistic(const CountsDataset& data, std::span<const double> probs) {
  data.require_complete();
  const int k = data.qubits();
  const std::size_t outcomes = static_cast<std::size_t>(pow2(k));
  if (probs.size() != pow3(k) * outcomes) throw ValidationError("probability table size mismatch");
  double t = 0.0;
  for (std::size_t d = 0; d < pow3(k); ++d) {
    const auto counts = data.counts(d);
    const double n = static_cast<double>(data.repetitions(d));
    for (std::size_t s = 0; s < outcomes; ++s) {
      const double e = n * std::max(probs[d * outcomes + s], 0.0);
      const double obs = static_cast<double>(counts[s]);
      if (e == 0.0) {
        if (obs > 0.0) return std::numeric_limits<double>::infinity();
        continue;
      }
      t += (obs - e) * (obs - e) / e;
    }
  }
  return t;
}

double pearson_statistic(const CountsDataset& data, const DensityMatrix& rho) {
  if (rho.dim() != data.dim()) throw ValidationError("pearson_statistic: dimension mismatch");
  return pearson_statistic(data, all_outcome_probabilities(rho));
}

int pearson_df(int qubits, int rank) {
  const int d = pow2(qubits);
  return static_cast<int>(pow3(qubits)) * (d - 1) - model_dim(d, rank);
}

std::string to_string(TestMethod m) { return m == TestMethod::kAsymptotic ? "asymptotic" : "bootstrap"; }

}  // namespace qtomo
