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

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qtomo/density_matrix.hpp"
#include "qtomo/matrix.hpp"

namespace qtomo {

enum class Axis : std::uint8_t { X = 0, Y = 1, Z = 2 };

char axis_char(Axis a);

// One Pauli axis per qubit. Leftmost qubit is the most significant digit of
// the base-3 setting index (x=0, y=1, z=2).
class Setting {
 public:
  explicit Setting(std::vector<Axis> axes);
  // Parses "xyzz"-style strings (case-insensitive).
  static Setting parse(std::string_view text);
  static Setting from_index(int qubits, std::size_t index);

  int qubits() const { return static_cast<int>(axes_.size()); }
  std::span<const Axis> axes() const { return axes_; }
  Axis axis(int qubit) const { return axes_[static_cast<std::size_t>(qubit)]; }
  std::size_t index() const;
  std::string str() const;

  auto operator<=>(const Setting&) const = default;

 private:
  std::vector<Axis> axes_;
};

// All 3^k settings in canonical index order.
std::vector<Setting> all_settings(int qubits);

// A +-1 result per qubit. Canonical index: +1 -> bit 0, -1 -> bit 1,
// leftmost qubit most significant.
class Outcome {
 public:
  Outcome(int qubits, std::size_t index);
  explicit Outcome(std::vector<int> signs);
  // Parses "+-+" strings.
  static Outcome parse(std::string_view text);

  int qubits() const { return qubits_; }
  std::size_t index() const { return index_; }
  int sign(int qubit) const;
  std::string str() const;

  auto operator<=>(const Outcome&) const = default;

 private:
  int qubits_;
  std::size_t index_;
};

// Bit of qubit `q` in a basis or outcome index on k qubits.
constexpr std::size_t qubit_bit(int qubits, int q) { return std::size_t{1} << (qubits - 1 - q); }

// Eigenvectors of sigma_d as columns (e_+, e_-):
// z: (1,0),(0,1); x: (1,+-1)/sqrt2; y: (1,+-i)/sqrt2.
Eigen::Matrix2cd single_qubit_basis(Axis a);

// Orthonormal basis |e_s^d>, s in canonical order.
std::vector<Vector> setting_basis(const Setting& d);
// Same basis as the columns of a unitary matrix.
Matrix setting_basis_matrix(const Setting& d);

// Multiplies every row of `a` (r x 2^k) on the right by the setting basis
// matrix, one qubit at a time: a <- a * B_d, or a <- a * B_d^dagger.
void apply_setting_basis(Matrix& a, const Setting& d, bool adjoint = false);
// Right-multiplies by the single-qubit basis of `axis` on qubit `q` only.
void apply_qubit_basis(Matrix& a, int qubits, int q, Axis axis, bool adjoint);

// P(s|d) = <e_s^d| rho |e_s^d>, dense projector path.
std::vector<double> outcome_probabilities(const DensityMatrix& rho, const Setting& d);
// Squared column norms of T * B_d over Tr(T^dagger T), factored path.
std::vector<double> outcome_probabilities(const TrapezoidalFactor& t, const Setting& d);
// Diagonal of B_d^dagger X B_d for an arbitrary (e.g. Jacobian) matrix X.
std::vector<double> basis_diagonal(const Matrix& x, const Setting& d);

// Probabilities for all settings, setting-major: entry [d * 2^k + s].
std::vector<double> all_outcome_probabilities(const DensityMatrix& rho);
std::vector<double> all_outcome_probabilities(const TrapezoidalFactor& t);

// Pauli index words over {0,x,y,z}: letter codes 0=identity, 1=x, 2=y,
// 3=z; word index is base 4 with the leftmost qubit most significant.
std::string pauli_word_str(int qubits, std::size_t word);
std::size_t parse_pauli_word(std::string_view text);

// Real coefficients of a selfadjoint matrix in the normalized Pauli basis
// 2^{-k/2} sigma_{i1} x ... x sigma_{ik}.
class PauliCoefficients {
 public:
  PauliCoefficients(int qubits, std::vector<double> coeffs);

  int qubits() const { return qubits_; }
  std::span<const double> values() const { return coeffs_; }
  double operator[](std::size_t word) const { return coeffs_[word]; }
  double at(std::string_view word) const { return coeffs_.at(parse_pauli_word(word)); }

 private:
  int qubits_;
  std::vector<double> coeffs_;
};

// Selfadjointness tolerance of pauli_expand.
inline constexpr double kSelfAdjointTolerance = 1e-10;

// rho_i = Tr(sigma~_i rho). Rejects non-selfadjoint input.
PauliCoefficients pauli_expand(const Matrix& rho);
// sum_i rho_i sigma~_i.
Matrix pauli_reconstruct(const PauliCoefficients& coeffs);
// Dense normalized Pauli matrix sigma~_i.
Matrix pauli_matrix(int qubits, std::size_t word);

}  // namespace qtomo
