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

#include "qtomo/inference.hpp"

#include <bit>
#include <cmath>
#include <limits>

#include "qtomo/errors.hpp"
#include "qtomo/lbfgs.hpp"
#include "qtomo/likelihood.hpp"
#include "qtomo/parallel.hpp"
#include "qtomo/rng.hpp"
#include "qtomo/states.hpp"

namespace qtomo {
namespace {

struct StartResult {
  Matrix factor;
  double loglik = -std::numeric_limits<double>::infinity();
  double grad_norm = std::numeric_limits<double>::infinity();
  int iterations = 0;
  LbfgsStatus status = LbfgsStatus::kInfeasibleStart;
};

// l grows linearly with the number of counts, and so does its gradient.
double stationarity_tolerance(const FitOptions& opt, double total) { return opt.grad_tol * std::max(1.0, total); }

Matrix random_trapezoid(int rank, int dim, Rng& rng) {
  Matrix t = complex_gaussian(rank, dim, rng);
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < i; ++j) t(i, j) = 0.0;
  return t;
}

Matrix padded_warm_start(const TrapezoidalFactor& warm, int rank, double pad, Rng& rng) {
  const int dim = warm.dim();
  if (warm.rank() == rank) return warm.matrix();
  if (warm.rank() != rank - 1) throw ValidationError("warm start must have rank r or r-1");
  Matrix t = Matrix::Zero(rank, dim);
  t.topRows(rank - 1) = warm.matrix() / std::sqrt(warm.frobenius_sq());
  const Matrix row = complex_gaussian(1, dim - (rank - 1), rng);
  t.block(rank - 1, rank - 1, 1, dim - (rank - 1)) = pad * row / row.norm();
  return t;
}

// Minimizes -l(T) + w (|T|^2 - 1)^2. The likelihood is invariant under
// T -> cT, so the penalty only pins the scale: at any stationary point
// |T| = 1 and dl = 0.
StartResult polish(const LikelihoodModel& model, const Matrix& start, const FitOptions& opt) {
  const int rank = static_cast<int>(start.rows());
  const int dim = static_cast<int>(start.cols());
  const double scale_weight = 0.25 * std::max(1.0, model.total());
  const double floor = opt.prob_floor;
  Objective f = [&](const RealVector& x, RealVector& grad) {
    const Matrix t = unpack_factor(x, rank, dim);
    const double norm = t.squaredNorm();
    if (!(norm > 0.0) || !std::isfinite(norm)) return std::numeric_limits<double>::quiet_NaN();
    Matrix g;
    const double l = model.evaluate(t, &g, floor);
    grad = -pack_gradient(g) + 4.0 * scale_weight * (norm - 1.0) * x;
    return -l + scale_weight * (norm - 1.0) * (norm - 1.0);
  };
  LbfgsOptions lo;
  lo.max_iterations = opt.max_iterations;
  lo.grad_tolerance = stationarity_tolerance(opt, model.total());
  lo.rel_tolerance = opt.rel_tol;
  Matrix t0 = start / start.norm();
  const LbfgsResult r = minimize_lbfgs(f, pack_factor(t0), lo);

  StartResult out;
  out.status = r.status;
  out.iterations = r.iterations;
  Matrix t = unpack_factor(r.x, rank, dim);
  const double norm = t.norm();
  if (!(norm > 0.0) || !t.allFinite()) return out;
  t /= norm;
  Matrix g;
  out.loglik = model.evaluate(t, &g, 0.0);
  if (!std::isfinite(out.loglik)) {
    model.evaluate(t, &g, floor);
  }
  out.grad_norm = pack_gradient(g).norm();
  out.factor = std::move(t);
  return out;
}

}  // namespace

DensityMatrix ModelFit::state() const { return state_from_factor(factor); }

ModelFit fit_rank(const CountsDataset& data, int rank, const FitOptions& options) {
  const int dim = data.dim();
  if (rank < 1 || rank > dim) throw ValidationError("rank must satisfy 1 <= r <= 2^k");
  if (options.restarts < 0) throw ValidationError("restarts must be non-negative");
  const LikelihoodModel model(data);

  std::vector<Matrix> starts;
  if (options.warm_start) {
    if (options.warm_start->dim() != dim) throw ValidationError("warm start dimension mismatch");
    Rng rng = make_rng(options.seed, {static_cast<std::uint64_t>(rank), 0xa11ULL});
    starts.push_back(padded_warm_start(*options.warm_start, rank, options.warm_pad, rng));
  }
  for (int i = 0; i < options.restarts; ++i) {
    Rng rng = make_rng(options.seed, {static_cast<std::uint64_t>(rank), static_cast<std::uint64_t>(i)});
    starts.push_back(random_trapezoid(rank, dim, rng));
  }
  if (starts.empty()) throw ValidationError("fit_rank needs at least one start");

  std::vector<StartResult> results(starts.size());
  parallel_for(
      starts.size(), [&](std::size_t i) { results[i] = polish(model, starts[i], options); },
      options.parallel ? 0u : 1u);

  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i)
    if (results[i].loglik > results[best].loglik) best = i;

  ModelFit fit;
  fit.rank = rank;
  fit.restarts_used = static_cast<int>(results.size());
  fit.best_start = static_cast<int>(best);
  fit.total_counts = data.total();
  fit.data_fingerprint = dataset_fingerprint(data);
  fit.tolerance = stationarity_tolerance(options, model.total());
  const StartResult& r = results[best];
  fit.status = to_string(r.status);
  fit.iterations = r.iterations;
  if (r.factor.size() == 0) {
    fit.factor = TrapezoidalFactor::identity(rank, dim);
    fit.loglik = -std::numeric_limits<double>::infinity();
    fit.grad_norm = std::numeric_limits<double>::infinity();
    fit.converged = false;
    return fit;
  }
  fit.factor = TrapezoidalFactor(r.factor);
  fit.loglik = r.loglik;
  fit.grad_norm = r.grad_norm;
  fit.converged = std::isfinite(r.loglik) && r.grad_norm < fit.tolerance;
  return fit;
}

IterativeFit fit_full_iterative(const CountsDataset& data, int max_iter, double tol) {
  data.require_complete();
  const int k = data.qubits();
  const int dim = data.dim();
  const auto settings = all_settings(k);
  std::vector<Matrix> bases;
  bases.reserve(settings.size());
  for (const Setting& d : settings) bases.push_back(setting_basis_matrix(d));

  Matrix rho = Matrix::Identity(dim, dim) / static_cast<double>(dim);
  auto loglik_of = [&](const Matrix& m) {
    double l = 0.0;
    for (std::size_t di = 0; di < settings.size(); ++di) {
      const Matrix mb = m * bases[di];
      const auto counts = data.counts(di);
      for (int s = 0; s < dim; ++s) {
        const auto n = static_cast<double>(counts[static_cast<std::size_t>(s)]);
        if (n == 0.0) continue;
        const double p = bases[di].col(s).dot(mb.col(s)).real();
        if (p <= 0.0) return -std::numeric_limits<double>::infinity();
        l += n * std::log(p);
      }
    }
    return l;
  };
  double l = loglik_of(rho);
  int it = 0;
  for (; it < max_iter; ++it) {
    Matrix r = Matrix::Zero(dim, dim);
    for (std::size_t di = 0; di < settings.size(); ++di) {
      const Matrix& b = bases[di];
      const Matrix rb = rho * b;
      const auto counts = data.counts(di);
      RealVector w(dim);
      for (int s = 0; s < dim; ++s) {
        const auto n = static_cast<double>(counts[static_cast<std::size_t>(s)]);
        const double p = std::max(b.col(s).dot(rb.col(s)).real(), 1e-300);
        w(s) = n / p;
      }
      r.noalias() += b * w.asDiagonal() * b.adjoint();
    }
    Matrix next = r * rho * r;
    next = 0.5 * (next + next.adjoint());
    next /= next.trace().real();
    const double l_next = loglik_of(next);
    const double gain = l_next - l;
    rho = std::move(next);
    l = l_next;
    if (gain < tol) {
      ++it;
      break;
    }
  }
  return IterativeFit{DensityMatrix(rho), l, it};
}

PauliCoefficients naive_coefficients(const CountsDataset& data) {
  data.require_complete();
  const int k = data.qubits();
  const std::size_t words = std::size_t{1} << (2 * k);
  const double scale = std::pow(2.0, -0.5 * k);
  std::vector<double> coeffs(words, 0.0);
  coeffs[0] = scale;
  for (std::size_t w = 1; w < words; ++w) {
    std::vector<Axis> axes(static_cast<std::size_t>(k));
    std::size_t mask = 0;
    for (int q = 0; q < k; ++q) {
      const auto letter = (w >> (2 * (k - 1 - q))) & 3u;
      if (letter == 0) {
        axes[static_cast<std::size_t>(q)] = Axis::Z;
      } else {
        axes[static_cast<std::size_t>(q)] = static_cast<Axis>(letter - 1);
        mask |= qubit_bit(k, q);
      }
    }
    const Setting d(std::move(axes));
    const auto counts = data.counts(d);
    double acc = 0.0;
    for (std::size_t s = 0; s < counts.size(); ++s) {
      const bool odd = (std::popcount(s & mask) & 1) != 0;
      acc += odd ? -static_cast<double>(counts[s]) : static_cast<double>(counts[s]);
    }
    coeffs[w] = scale * acc / static_cast<double>(data.repetitions(d.index()));
  }
  return PauliCoefficients(k, std::move(coeffs));
}

Matrix naive_estimate(const CountsDataset& data) { return pauli_reconstruct(naive_coefficients(data)); }

ChartFit fit_chart(const CountsDataset& data, const Chart& chart, const RealVector& start,
                   const std::vector<bool>& pinned, const FitOptions& options) {
  data.require_complete();
  if (chart.dim() != data.dim()) throw ValidationError("chart dimension does not match dataset");
  const int p = chart.parameters();
  if (start.size() != p) throw ValidationError("start has wrong parameter dimension");
  if (!pinned.empty() && static_cast<int>(pinned.size()) != p) throw ValidationError("pinned mask has wrong size");
  std::vector<int> free;
  for (int j = 0; j < p; ++j)
    if (pinned.empty() || !pinned[static_cast<std::size_t>(j)]) free.push_back(j);

  const auto settings = all_settings(data.qubits());
  const auto outcomes = static_cast<std::size_t>(data.dim());
  auto full_theta = [&](const RealVector& x) {
    RealVector theta = start;
    for (std::size_t i = 0; i < free.size(); ++i) theta(free[i]) = x(static_cast<Eigen::Index>(i));
    return theta;
  };
  // Returns l and its gradient over all chart coordinates.
  auto loglik = [&](const RealVector& theta, RealVector* grad) {
    Matrix rho;
    try {
      rho = chart.state(theta);
    } catch (const ValidationError&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
    std::vector<Matrix> jac;
    if (grad) {
      jac = chart.jacobian(theta);
      grad->setZero(p);
    }
    double l = 0.0;
    for (const Setting& d : settings) {
      const auto probs = basis_diagonal(rho, d);
      const auto counts = data.counts(d);
      std::vector<double> w(outcomes, 0.0);
      for (std::size_t s = 0; s < outcomes; ++s) {
        const auto n = static_cast<double>(counts[s]);
        if (n == 0.0) continue;
        if (probs[s] <= 0.0) return std::numeric_limits<double>::quiet_NaN();
        l += n * std::log(probs[s]);
        w[s] = n / probs[s];
      }
      if (grad)
        for (int j = 0; j < p; ++j) {
          const auto dp = basis_diagonal(jac[static_cast<std::size_t>(j)], d);
          double acc = 0.0;
          for (std::size_t s = 0; s < outcomes; ++s) acc += w[s] * dp[s];
          (*grad)(j) += acc;
        }
    }
    return l;
  };
  Objective f = [&](const RealVector& x, RealVector& g) {
    RealVector full_grad;
    const double l = loglik(full_theta(x), &full_grad);
    if (!std::isfinite(l)) return std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < free.size(); ++i) g(static_cast<Eigen::Index>(i)) = -full_grad(free[i]);
    return -l;
  };
  RealVector x0(static_cast<Eigen::Index>(free.size()));
  for (std::size_t i = 0; i < free.size(); ++i) x0(static_cast<Eigen::Index>(i)) = start(free[i]);
  LbfgsOptions lo;
  lo.max_iterations = options.max_iterations;
  lo.grad_tolerance = stationarity_tolerance(options, static_cast<double>(data.total()));
  lo.rel_tolerance = options.rel_tol;
  const LbfgsResult r = minimize_lbfgs(f, x0, lo);

  ChartFit out;
  out.theta = full_theta(r.x);
  out.loglik = -r.value;
  out.grad_norm = r.grad_norm;
  out.iterations = r.iterations;
  out.converged = r.grad_norm < lo.grad_tolerance;
  return out;
}

}  // namespace qtomo
