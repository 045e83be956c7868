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

#include "qtomo/density_matrix.hpp"

namespace qtomo {

// rho = T^dagger T / Tr(T^dagger T). Throws ValidationError on a zero factor.
DensityMatrix state_from_factor(const TrapezoidalFactor& t);

// Rank-r state from an r x 2^k matrix of i.i.d. standard complex Gaussians,
// normalized. r = 1 gives a Haar-random pure state.
DensityMatrix random_state(int qubits, int rank, std::uint64_t seed);

// random_state, redrawn (deterministically from `seed`) until the smallest
// nonzero eigenvalue is at least `min_ratio` times the largest.
DensityMatrix random_significant_state(int qubits, int rank, std::uint64_t seed, double min_ratio = 0.02);

// Haar-random unit vector in C^(2^k).
Vector haar_random_vector(int qubits, std::uint64_t seed);

// Sum_ij |rho_ij - sigma_ij|^2.
double hs_distance_sq(const Matrix& rho, const Matrix& sigma);
double hs_distance_sq(const DensityMatrix& rho, const DensityMatrix& sigma);

// Tr|rho - sigma| (sum of absolute eigenvalues of the difference).
double trace_norm_distance(const Matrix& rho, const Matrix& sigma);

// The unique r-row factor with positive real diagonal and T^dagger T = rho,
// for states whose leading r x r principal minor has rank r. The result has
// Tr(T^dagger T) = 1. Throws NumericalError for deficient states.
TrapezoidalFactor cholesky_factor(const DensityMatrix& rho, int rank);

// Eigen-decomposition based factor for any state: rows sqrt(lambda_i) v_i^dagger,
// re-triangularized by a QR step so it is upper trapezoidal.
TrapezoidalFactor factor_from_state(const DensityMatrix& rho, int rank);

}  // namespace qtomo
