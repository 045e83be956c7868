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
#include <span>
#include <vector>

#include "qtomo/density_matrix.hpp"
#include "qtomo/pauli.hpp"

namespace qtomo {

// Counts N(s|d) for the settings of a k-qubit Pauli tomography experiment.
// A setting may be absent; fitting requires all 3^k settings.
class CountsDataset {
 public:
  explicit CountsDataset(int qubits);

  int qubits() const { return qubits_; }
  int dim() const { return pow2(qubits_); }
  std::size_t num_settings() const { return counts_.size(); }

  // Stores the 2^k counts of one setting, replacing any previous entry.
  void set_counts(const Setting& d, std::vector<std::int64_t> counts);
  void set_counts(std::size_t setting_index, std::vector<std::int64_t> counts);

  bool has_setting(std::size_t setting_index) const { return !counts_.at(setting_index).empty(); }
  // Empty span when the setting is absent.
  std::span<const std::int64_t> counts(std::size_t setting_index) const { return counts_.at(setting_index); }
  std::span<const std::int64_t> counts(const Setting& d) const { return counts(d.index()); }
  std::int64_t count(const Setting& d, const Outcome& s) const;

  // n(d): repetitions of setting d (sum of its counts), 0 when absent.
  std::int64_t repetitions(std::size_t setting_index) const { return reps_.at(setting_index); }
  // N_tot = sum_d n(d).
  std::int64_t total() const;

  bool is_complete() const;
  // Throws ValidationError naming the first missing setting.
  void require_complete() const;

  friend bool operator==(const CountsDataset&, const CountsDataset&) = default;

 private:
  int qubits_;
  std::vector<std::vector<std::int64_t>> counts_;
  std::vector<std::int64_t> reps_;
};

// 64-bit FNV-1a hash of k and all counts; equal datasets hash equal.
std::uint64_t dataset_fingerprint(const CountsDataset& data);

// Draws one multinomial(n, P_rho(.|d)) sample per setting. Each setting uses
// the sub-seed (seed, setting index), so output is fixed by `seed`.
CountsDataset simulate_dataset(const DensityMatrix& rho, std::int64_t n, std::uint64_t seed);
// Same, with a per-setting repetition count (length 3^k).
CountsDataset simulate_dataset(const DensityMatrix& rho, std::span<const std::int64_t> n, std::uint64_t seed);
// Simulation from a precomputed setting-major probability table.
CountsDataset simulate_from_probabilities(int qubits, std::span<const double> probs,
                                          std::span<const std::int64_t> n, std::uint64_t seed);

}  // namespace qtomo
