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

#include "qtomo/pauli.hpp"

#include <cctype>
#include <cmath>

#include "qtomo/errors.hpp"

namespace qtomo {
namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

void check_qubits(int k) {
  if (k < 1 || k > 20) throw ValidationError("qubit count must be in [1, 20]");
}

// Matrix element <a|sigma_word|a ^ flip>; returns the flip mask and phase.
struct PauliAction {
  std::size_t flip;
  Complex phase;
};

PauliAction pauli_action(int k, std::size_t word, std::size_t a) {
  std::size_t flip = 0;
  Complex phase(1.0, 0.0);
  for (int q = 0; q < k; ++q) {
    const auto letter = (word >> (2 * (k - 1 - q))) & 3u;
    const std::size_t bit = qubit_bit(k, q);
    const bool a_one = (a & bit) != 0;
    switch (letter) {
      case 1:
        flip |= bit;
        break;
      case 2:
        flip |= bit;
        // <0|Y|1> = -i, <1|Y|0> = +i
        phase *= a_one ? Complex(0.0, 1.0) : Complex(0.0, -1.0);
        break;
      case 3:
        if (a_one) phase = -phase;
        break;
      default:
        break;
    }
  }
  return {flip, phase};
}

int qubits_of_dim(Eigen::Index dim) {
  int k = 0;
  while ((Eigen::Index{1} << k) < dim) ++k;
  if ((Eigen::Index{1} << k) != dim || k < 1)
    throw ValidationError("matrix dimension must be 2^k with k >= 1");
  return k;
}

}  // namespace

char axis_char(Axis a) {
  switch (a) {
    case Axis::X:
      return 'x';
    case Axis::Y:
      return 'y';
    case Axis::Z:
      return 'z';
  }
  return '?';
}

Setting::Setting(std::vector<Axis> axes) : axes_(std::move(axes)) { check_qubits(qubits()); }

Setting Setting::parse(std::string_view text) {
  std::vector<Axis> axes;
  axes.reserve(text.size());
  for (char c : text) {
    switch (std::tolower(static_cast<unsigned char>(c))) {
      case 'x':
        axes.push_back(Axis::X);
        break;
      case 'y':
        axes.push_back(Axis::Y);
        break;
      case 'z':
        axes.push_back(Axis::Z);
        break;
      default:
        throw ValidationError("malformed setting string '" + std::string(text) + "'");
    }
  }
  if (axes.empty()) throw ValidationError("empty setting string");
  return Setting(std::move(axes));
}

Setting Setting::from_index(int qubits, std::size_t index) {
  check_qubits(qubits);
  if (index >= pow3(qubits)) throw ValidationError("setting index out of range");
  std::vector<Axis> axes(static_cast<std::size_t>(qubits));
  for (int q = qubits - 1; q >= 0; --q) {
    axes[static_cast<std::size_t>(q)] = static_cast<Axis>(index % 3);
    index /= 3;
  }
  return Setting(std::move(axes));
}

std::size_t Setting::index() const {
  std::size_t idx = 0;
  for (Axis a : axes_) idx = idx * 3 + static_cast<std::size_t>(a);
  return idx;
}

std::string Setting::str() const {
  std::string s;
  for (Axis a : axes_) s.push_back(axis_char(a));
  return s;
}

std::vector<Setting> all_settings(int qubits) {
  std::vector<Setting> out;
  out.reserve(pow3(qubits));
  for (std::size_t i = 0; i < pow3(qubits); ++i) out.push_back(Setting::from_index(qubits, i));
  return out;
}

Outcome::Outcome(int qubits, std::size_t index) : qubits_(qubits), index_(index) {
  check_qubits(qubits);
  if (index >= static_cast<std::size_t>(pow2(qubits))) throw ValidationError("outcome index out of range");
}

Outcome::Outcome(std::vector<int> signs) : qubits_(static_cast<int>(signs.size())), index_(0) {
  check_qubits(qubits_);
  for (int s : signs) {
    if (s != 1 && s != -1) throw ValidationError("outcome signs must be +1 or -1");
    index_ = (index_ << 1) | (s == -1 ? 1u : 0u);
  }
}

Outcome Outcome::parse(std::string_view text) {
  std::vector<int> signs;
  for (char c : text) {
    if (c == '+')
      signs.push_back(1);
    else if (c == '-')
      signs.push_back(-1);
    else
      throw ValidationError("malformed outcome string '" + std::string(text) + "'");
  }
  if (signs.empty()) throw ValidationError("empty outcome string");
  return Outcome(std::move(signs));
}

int Outcome::sign(int qubit) const { return (index_ & qubit_bit(qubits_, qubit)) ? -1 : 1; }

std::string Outcome::str() const {
  std::string s;
  for (int q = 0; q < qubits_; ++q) s.push_back(sign(q) > 0 ? '+' : '-');
  return s;
}

Eigen::Matrix2cd single_qubit_basis(Axis a) {
  Eigen::Matrix2cd b;
  switch (a) {
    case Axis::Z:
      b << 1.0, 0.0, 0.0, 1.0;
      break;
    case Axis::X:
      b << kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2;
      break;
    case Axis::Y:
      b << Complex(kInvSqrt2, 0.0), Complex(kInvSqrt2, 0.0), Complex(0.0, kInvSqrt2),
          Complex(0.0, -kInvSqrt2);
      break;
  }
  return b;
}

Matrix setting_basis_matrix(const Setting& d) {
  Matrix b = Matrix::Identity(1, 1);
  for (Axis a : d.axes()) {
    const Eigen::Matrix2cd q = single_qubit_basis(a);
    Matrix next(b.rows() * 2, b.cols() * 2);
    for (Eigen::Index i = 0; i < b.rows(); ++i)
      for (Eigen::Index j = 0; j < b.cols(); ++j)
        next.block(2 * i, 2 * j, 2, 2) = b(i, j) * q;
    b = std::move(next);
  }
  return b;
}

std::vector<Vector> setting_basis(const Setting& d) {
  const Matrix b = setting_basis_matrix(d);
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(b.cols()));
  for (Eigen::Index s = 0; s < b.cols(); ++s) out.emplace_back(b.col(s));
  return out;
}

void apply_qubit_basis(Matrix& a, int qubits, int q, Axis axis, bool adjoint) {
  if (axis == Axis::Z) return;
  Eigen::Matrix2cd b = single_qubit_basis(axis);
  if (adjoint) b.adjointInPlace();
  const std::size_t bit = qubit_bit(qubits, q);
  const auto dim = static_cast<std::size_t>(a.cols());
  const Eigen::Index rows = a.rows();
  const Complex b00 = b(0, 0), b01 = b(0, 1), b10 = b(1, 0), b11 = b(1, 1);
  for (std::size_t j0 = 0; j0 < dim; ++j0) {
    if (j0 & bit) continue;
    const std::size_t j1 = j0 | bit;
    Complex* c0 = a.col(static_cast<Eigen::Index>(j0)).data();
    Complex* c1 = a.col(static_cast<Eigen::Index>(j1)).data();
    for (Eigen::Index r = 0; r < rows; ++r) {
      const Complex x0 = c0[r];
      const Complex x1 = c1[r];
      c0[r] = x0 * b00 + x1 * b10;
      c1[r] = x0 * b01 + x1 * b11;
    }
  }
}

void apply_setting_basis(Matrix& a, const Setting& d, bool adjoint) {
  if (a.cols() != pow2(d.qubits())) throw ValidationError("dimension mismatch between matrix and setting");
  for (int q = 0; q < d.qubits(); ++q) apply_qubit_basis(a, d.qubits(), q, d.axis(q), adjoint);
}

std::vector<double> basis_diagonal(const Matrix& x, const Setting& d) {
  if (x.rows() != pow2(d.qubits()) || x.cols() != x.rows())
    throw ValidationError("dimension mismatch between matrix and setting");
  const Matrix b = setting_basis_matrix(d);
  const Matrix xb = x * b;
  std::vector<double> out(static_cast<std::size_t>(b.cols()));
  for (Eigen::Index s = 0; s < b.cols(); ++s) out[static_cast<std::size_t>(s)] = b.col(s).dot(xb.col(s)).real();
  return out;
}

std::vector<double> outcome_probabilities(const DensityMatrix& rho, const Setting& d) {
  return basis_diagonal(rho.matrix(), d);
}

std::vector<double> outcome_probabilities(const TrapezoidalFactor& t, const Setting& d) {
  if (t.dim() != pow2(d.qubits())) throw ValidationError("dimension mismatch between factor and setting");
  const double norm = t.frobenius_sq();
  if (!(norm > 0.0)) throw ValidationError("zero trapezoidal factor");
  Matrix a = t.matrix();
  apply_setting_basis(a, d);
  std::vector<double> out(static_cast<std::size_t>(a.cols()));
  for (Eigen::Index s = 0; s < a.cols(); ++s) out[static_cast<std::size_t>(s)] = a.col(s).squaredNorm() / norm;
  return out;
}

std::vector<double> all_outcome_probabilities(const DensityMatrix& rho) {
  const int k = rho.qubits();
  if (k < 1) throw ValidationError("state dimension must be 2^k");
  std::vector<double> out;
  out.reserve(pow3(k) * static_cast<std::size_t>(pow2(k)));
  for (const Setting& d : all_settings(k)) {
    const auto p = outcome_probabilities(rho, d);
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

std::vector<double> all_outcome_probabilities(const TrapezoidalFactor& t) {
  const int k = qubits_of_dim(t.dim());
  std::vector<double> out;
  out.reserve(pow3(k) * static_cast<std::size_t>(pow2(k)));
  for (const Setting& d : all_settings(k)) {
    const auto p = outcome_probabilities(t, d);
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

std::string pauli_word_str(int qubits, std::size_t word) {
  static constexpr char kLetters[] = {'0', 'x', 'y', 'z'};
  std::string s(static_cast<std::size_t>(qubits), '0');
  for (int q = qubits - 1; q >= 0; --q) {
    s[static_cast<std::size_t>(q)] = kLetters[word & 3u];
    word >>= 2;
  }
  return s;
}

std::size_t parse_pauli_word(std::string_view text) {
  if (text.empty()) throw ValidationError("empty Pauli word");
  std::size_t word = 0;
  for (char c : text) {
    std::size_t letter = 0;
    switch (std::tolower(static_cast<unsigned char>(c))) {
      case '0':
      case 'i':
        letter = 0;
        break;
      case 'x':
        letter = 1;
        break;
      case 'y':
        letter = 2;
        break;
      case 'z':
        letter = 3;
        break;
      default:
        throw ValidationError("malformed Pauli word '" + std::string(text) + "'");
    }
    word = (word << 2) | letter;
  }
  return word;
}

PauliCoefficients::PauliCoefficients(int qubits, std::vector<double> coeffs)
    : qubits_(qubits), coeffs_(std::move(coeffs)) {
  check_qubits(qubits);
  if (coeffs_.size() != (std::size_t{1} << (2 * qubits)))
    throw ValidationError("Pauli coefficient vector must have 4^k entries");
}

PauliCoefficients pauli_expand(const Matrix& rho) {
  if (rho.rows() != rho.cols()) throw ValidationError("matrix must be square");
  const int k = qubits_of_dim(rho.rows());
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kSelfAdjointTolerance)
    throw ValidationError("pauli_expand requires a selfadjoint matrix");
  const auto dim = static_cast<std::size_t>(rho.rows());
  const std::size_t words = std::size_t{1} << (2 * k);
  const double scale = std::pow(2.0, -0.5 * k);
  std::vector<double> coeffs(words, 0.0);
  for (std::size_t w = 0; w < words; ++w) {
    Complex acc(0.0, 0.0);
    for (std::size_t a = 0; a < dim; ++a) {
      const PauliAction act = pauli_action(k, w, a);
      acc += act.phase * rho(static_cast<Eigen::Index>(a ^ act.flip), static_cast<Eigen::Index>(a));
    }
    coeffs[w] = scale * acc.real();
  }
  return PauliCoefficients(k, std::move(coeffs));
}

Matrix pauli_reconstruct(const PauliCoefficients& coeffs) {
  const int k = coeffs.qubits();
  const auto dim = static_cast<std::size_t>(pow2(k));
  const double scale = std::pow(2.0, -0.5 * k);
  Matrix rho = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  const auto values = coeffs.values();
  for (std::size_t w = 0; w < values.size(); ++w) {
    if (values[w] == 0.0) continue;
    for (std::size_t a = 0; a < dim; ++a) {
      const PauliAction act = pauli_action(k, w, a);
      rho(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a ^ act.flip)) += scale * values[w] * act.phase;
    }
  }
  return rho;
}

Matrix pauli_matrix(int qubits, std::size_t word) {
  check_qubits(qubits);
  const auto dim = static_cast<std::size_t>(pow2(qubits));
  const double scale = std::pow(2.0, -0.5 * qubits);
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t a = 0; a < dim; ++a) {
    const PauliAction act = pauli_action(qubits, word, a);
    m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a ^ act.flip)) = scale * act.phase;
  }
  return m;
}

}  // namespace qtomo
