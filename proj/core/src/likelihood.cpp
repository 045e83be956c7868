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

#include "qtomo/likelihood.hpp"

#include <cmath>
#include <limits>

#include "qtomo/errors.hpp"

namespace qtomo {

struct LikelihoodModel::Workspace {
  std::vector<Matrix> forward;   // forward[q]: T rotated on qubits < q
  std::vector<Matrix> backward;  // accumulated adjoint-rotated weights
  Matrix scratch;
  double norm = 0.0;
  double floor = 0.0;
  double loglik = 0.0;
  double unclamped_counts = 0.0;
};

LikelihoodModel::LikelihoodModel(const CountsDataset& data) : qubits_(data.qubits()), total_(0.0) {
  data.require_complete();
  const auto outcomes = static_cast<std::size_t>(pow2(qubits_));
  counts_.reserve(data.num_settings() * outcomes);
  for (std::size_t d = 0; d < data.num_settings(); ++d)
    for (std::int64_t c : data.counts(d)) counts_.push_back(static_cast<double>(c));
  total_ = static_cast<double>(data.total());
}

void LikelihoodModel::visit(int level, std::size_t prefix, Workspace& ws, bool want_grad) const {
  if (level == qubits_) {
    const Matrix& a = ws.forward[static_cast<std::size_t>(level)];
    Matrix& out = ws.backward[static_cast<std::size_t>(level)];
    const Eigen::Index outcomes = a.cols();
    const double* n = counts_.data() + prefix * static_cast<std::size_t>(outcomes);
    if (want_grad) out.resize(a.rows(), a.cols());
    for (Eigen::Index s = 0; s < outcomes; ++s) {
      const double ns = n[s];
      if (ns == 0.0) {
        if (want_grad) out.col(s).setZero();
        continue;
      }
      const double col = a.col(s).squaredNorm();
      const double p = col / ws.norm;
      if (p >= ws.floor && p > 0.0) {
        ws.loglik += ns * std::log(p);
        ws.unclamped_counts += ns;
        if (want_grad) out.col(s) = (ns / col) * a.col(s);
      } else {
        ws.loglik += ws.floor > 0.0 ? ns * std::log(ws.floor) : -std::numeric_limits<double>::infinity();
        if (want_grad) out.col(s).setZero();
      }
    }
    return;
  }
  const auto lv = static_cast<std::size_t>(level);
  if (want_grad) ws.backward[lv].setZero(ws.forward[lv].rows(), ws.forward[lv].cols());
  for (int axis = 0; axis < 3; ++axis) {
    ws.forward[lv + 1] = ws.forward[lv];
    apply_qubit_basis(ws.forward[lv + 1], qubits_, level, static_cast<Axis>(axis), false);
    visit(level + 1, prefix * 3 + static_cast<std::size_t>(axis), ws, want_grad);
    if (want_grad) {
      ws.scratch = ws.backward[lv + 1];
      apply_qubit_basis(ws.scratch, qubits_, level, static_cast<Axis>(axis), true);
      ws.backward[lv] += ws.scratch;
    }
  }
}

double LikelihoodModel::evaluate(const Matrix& t, Matrix* grad, double floor) const {
  if (t.cols() != dim()) throw ValidationError("factor dimension does not match dataset");
  Workspace ws;
  ws.norm = t.squaredNorm();
  if (!(ws.norm > 0.0)) throw ValidationError("zero factor");
  ws.floor = floor;
  ws.forward.resize(static_cast<std::size_t>(qubits_) + 1);
  ws.backward.resize(static_cast<std::size_t>(qubits_) + 1);
  ws.forward[0] = t;
  visit(0, 0, ws, grad != nullptr);
  if (grad) {
    *grad = ws.backward[0] - (ws.unclamped_counts / ws.norm) * t;
    for (Eigen::Index i = 0; i < grad->rows(); ++i)
      for (Eigen::Index j = 0; j < i && j < grad->cols(); ++j) (*grad)(i, j) = 0.0;
  }
  return ws.loglik;
}

double LikelihoodModel::evaluate(const DensityMatrix& rho) const {
  if (rho.dim() != dim()) throw ValidationError("state dimension does not match dataset");
  const auto outcomes = static_cast<std::size_t>(dim());
  double l = 0.0;
  for (const Setting& d : all_settings(qubits_)) {
    const auto p = outcome_probabilities(rho, d);
    const double* n = counts_.data() + d.index() * outcomes;
    for (std::size_t s = 0; s < outcomes; ++s) {
      if (n[s] == 0.0) continue;
      if (p[s] <= 0.0) return -std::numeric_limits<double>::infinity();
      l += n[s] * std::log(p[s]);
    }
  }
  return l;
}

RealVector pack_factor(const Matrix& t) {
  const auto rows = static_cast<int>(t.rows());
  const auto cols = static_cast<int>(t.cols());
  RealVector x(2 * trapezoid_entries(rows, cols));
  Eigen::Index p = 0;
  for (int i = 0; i < rows; ++i)
    for (int j = i; j < cols; ++j) {
      x(p++) = t(i, j).real();
      x(p++) = t(i, j).imag();
    }
  return x;
}

Matrix unpack_factor(const RealVector& x, int rank, int dim) {
  if (x.size() != 2 * trapezoid_entries(rank, dim)) throw ValidationError("packed factor has wrong length");
  Matrix t = Matrix::Zero(rank, dim);
  Eigen::Index p = 0;
  for (int i = 0; i < rank; ++i)
    for (int j = i; j < dim; ++j) {
      t(i, j) = Complex(x(p), x(p + 1));
      p += 2;
    }
  return t;
}

RealVector pack_gradient(const Matrix& grad_conj) {
  // dl = 2 Re(conj(G) dT): d/dRe = 2 Re G, d/dIm = 2 Im G.
  return 2.0 * pack_factor(grad_conj);
}

double log_likelihood(const DensityMatrix& rho, const CountsDataset& data) {
  return LikelihoodModel(data).evaluate(rho);
}

double log_likelihood(const TrapezoidalFactor& t, const CountsDataset& data) {
  return LikelihoodModel(data).evaluate(t.matrix(), nullptr, 0.0);
}

RealVector loglik_gradient(const TrapezoidalFactor& t, const CountsDataset& data) {
  const LikelihoodModel model(data);
  Matrix g;
  const double l = model.evaluate(t.matrix(), &g, 0.0);
  if (!std::isfinite(l)) throw NumericalError("log-likelihood gradient is undefined at -inf likelihood");
  return pack_gradient(g);
}

}  // namespace qtomo
