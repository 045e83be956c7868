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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qtomo/density_matrix.hpp"
#include "qtomo/run_config.hpp"
#include "qtomo/selection.hpp"

namespace qtomo {

// Where a study persists its results. Completed replicates are appended to
// manifest.jsonl as they finish, so an interrupted run resumes from there.
struct StudyOutput {
  std::filesystem::path dir;
  // Reuse a manifest left by a run with the same config hash.
  bool resume = true;
};

struct StudyFailure {
  std::size_t job = 0;
  std::string key;
  std::string message;
};

// --- Study 1: random low-rank k-qubit states -------------------------------

struct Study1Config {
  int qubits = 4;
  std::vector<int> true_ranks{1, 2, 3};
  std::int64_t n = 100;
  int replicates = 20;
  int max_rank = 4;
  std::uint64_t seed = 1;
  int restarts = 5;
  // Truth states are redrawn until lambda_min >= ratio * lambda_max.
  double min_eigen_ratio = 0.02;
  unsigned threads = 0;

  RunConfig to_config() const;
};

struct Study1Record {
  int true_rank = 0;
  int replicate = 0;
  std::uint64_t seed = 0;
  std::vector<RankEntry> ranks;
  std::vector<double> mse;  // ||rho_r - rho||_2^2 per fitted rank
  int selected_aic = 0;
  int selected_bic = 0;
  // K(P_rho | P_rho1) at the fitted rank-1 state.
  double kl_rank1 = 0.0;

  // 2 (l(r+1) - l(r)); requires both ranks fitted.
  double lambda(int rank_lo) const;
};

struct Study1Report {
  Study1Config config;
  std::string config_hash;
  std::vector<DensityMatrix> truths;  // one per true rank
  std::vector<Study1Record> records;  // ordered by (true rank, replicate)
  std::vector<StudyFailure> failures;
  // table[i][r - 1]: replicates of truths[i] for which the criterion chose r.
  std::vector<std::vector<int>> aic_table;
  std::vector<std::vector<int>> bic_table;
};

// Truth state of study 1 for one rank; fixed by (seed, rank).
DensityMatrix study1_truth(const Study1Config& config, int rank);

Study1Report run_study1(const Study1Config& config, const std::optional<StudyOutput>& output = std::nullopt);

// --- Study 2: one-qubit states of varying purity ---------------------------

struct Study2Config {
  std::vector<std::int64_t> ns{10, 50, 100, 250, 500};
  // Smaller eigenvalue of each truth state; 0 gives a pure state.
  std::vector<double> minor_eigenvalues{0.0, 0.05, 0.28};
  int replicates = 200;
  std::uint64_t seed = 1;
  int restarts = 5;
  // Bloch direction of the dominant eigenvector.
  double bloch_theta = 1.0;
  double bloch_phi = 0.7;
  unsigned threads = 0;

  RunConfig to_config() const;
};

struct Study2Record {
  int state = 0;  // index into minor_eigenvalues
  std::int64_t n = 0;
  int replicate = 0;
  std::uint64_t seed = 0;
  std::vector<RankEntry> ranks;  // ranks 1 and 2
  std::vector<double> mse;
  int selected_aic = 0;
  int selected_bic = 0;
};

struct Study2Cell {
  int state = 0;
  std::int64_t n = 0;
  int replicates = 0;
  int aic_correct = 0;
  int bic_correct = 0;
  std::vector<double> mse_mean;    // per rank
  std::vector<double> mse_stderr;  // per rank

  double aic_rate() const { return replicates ? static_cast<double>(aic_correct) / replicates : 0.0; }
  double bic_rate() const { return replicates ? static_cast<double>(bic_correct) / replicates : 0.0; }
};

struct Study2Report {
  Study2Config config;
  std::string config_hash;
  std::vector<DensityMatrix> truths;
  std::vector<int> true_ranks;
  std::vector<Study2Record> records;  // ordered by (state, n, replicate)
  std::vector<StudyFailure> failures;
  std::vector<Study2Cell> cells;      // ordered by (state, n)

  const Study2Cell& cell(int state, std::int64_t n) const;
};

// lambda |psi><psi| + (1 - lambda) |psi_perp><psi_perp| with psi on the
// configured Bloch direction and 1 - lambda = minor eigenvalue.
DensityMatrix study2_truth(const Study2Config& config, int state);

Study2Report run_study2(const Study2Config& config, const std::optional<StudyOutput>& output = std::nullopt);

}  // namespace qtomo
