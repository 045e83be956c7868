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

#include "qtomo/dataset.hpp"

#include <numeric>

#include "qtomo/errors.hpp"
#include "qtomo/rng.hpp"

namespace qtomo {

CountsDataset::CountsDataset(int qubits) : qubits_(qubits) {
  if (qubits < 1 || qubits > 12) throw ValidationError("qubit count must be in [1, 12]");
  counts_.resize(pow3(qubits));
  reps_.assign(pow3(qubits), 0);
}

void CountsDataset::set_counts(const Setting& d, std::vector<std::int64_t> counts) {
  if (d.qubits() != qubits_) throw ValidationError("setting '" + d.str() + "' has inconsistent qubit count");
  set_counts(d.index(), std::move(counts));
}

void CountsDataset::set_counts(std::size_t setting_index, std::vector<std::int64_t> counts) {
  if (setting_index >= counts_.size()) throw ValidationError("setting index out of range");
  if (counts.size() != static_cast<std::size_t>(dim()))
    throw ValidationError("setting needs exactly 2^k outcome counts");
  for (std::int64_t c : counts)
    if (c < 0) throw ValidationError("negative count");
  reps_[setting_index] = std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
  counts_[setting_index] = std::move(counts);
}

std::int64_t CountsDataset::count(const Setting& d, const Outcome& s) const {
  const auto c = counts(d);
  if (c.empty()) return 0;
  return c[s.index()];
}

std::int64_t CountsDataset::total() const { return std::accumulate(reps_.begin(), reps_.end(), std::int64_t{0}); }

bool CountsDataset::is_complete() const {
  for (const auto& c : counts_)
    if (c.empty()) return false;
  return true;
}

void CountsDataset::require_complete() const {
  for (std::size_t i = 0; i < counts_.size(); ++i)
    if (counts_[i].empty())
      throw ValidationError("incomplete dataset: setting '" + Setting::from_index(qubits_, i).str() + "' is missing");
}

std::uint64_t dataset_fingerprint(const CountsDataset& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xffu;
      h *= 0x100000001b3ULL;
    }
  };
  mix(static_cast<std::uint64_t>(data.qubits()));
  for (std::size_t d = 0; d < data.num_settings(); ++d) {
    mix(data.has_setting(d) ? 1u : 0u);
    for (std::int64_t c : data.counts(d)) mix(static_cast<std::uint64_t>(c));
  }
  return h;
}

CountsDataset simulate_from_probabilities(int qubits, std::span<const double> probs,
                                          std::span<const std::int64_t> n, std::uint64_t seed) {
  const std::size_t settings = pow3(qubits);
  const auto outcomes = static_cast<std::size_t>(pow2(qubits));
  if (probs.size() != settings * outcomes) throw ValidationError("probability table has wrong size");
  if (n.size() != settings) throw ValidationError("repetition vector must have 3^k entries");
  CountsDataset data(qubits);
  for (std::size_t d = 0; d < settings; ++d) {
    if (n[d] < 1) throw ValidationError("repetitions per setting must be >= 1");
    Rng rng = make_rng(seed, {d});
    data.set_counts(d, sample_multinomial(n[d], probs.subspan(d * outcomes, outcomes), rng));
  }
  return data;
}

CountsDataset simulate_dataset(const DensityMatrix& rho, std::span<const std::int64_t> n, std::uint64_t seed) {
  const int k = rho.qubits();
  if (k < 1) throw ValidationError("state dimension must be 2^k");
  const auto probs = all_outcome_probabilities(rho);
  return simulate_from_probabilities(k, probs, n, seed);
}

CountsDataset simulate_dataset(const DensityMatrix& rho, std::int64_t n, std::uint64_t seed) {
  if (n < 1) throw ValidationError("repetitions per setting must be >= 1");
  const int k = rho.qubits();
  if (k < 1) throw ValidationError("state dimension must be 2^k");
  const std::vector<std::int64_t> reps(pow3(k), n);
  return simulate_dataset(rho, reps, seed);
}

}  // namespace qtomo
