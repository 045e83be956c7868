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

#include <functional>

#include "qtomo/matrix.hpp"

namespace qtomo {

// Objective for minimization: returns f(x) and writes the gradient into `grad`
// (already sized). Returning a non-finite value marks x as infeasible; the
// line search then backtracks.
using Objective = std::function<double(const RealVector& x, RealVector& grad)>;

struct LbfgsOptions {
  int memory = 10;
  int max_iterations = 2000;
  // Stop when ||grad||_2 < grad_tolerance.
  double grad_tolerance = 1e-6;
  // Stop when |f_prev - f| <= rel_tolerance * max(1, |f|).
  double rel_tolerance = 1e-9;
  int max_linesearch = 40;
  // Wolfe constants.
  double armijo = 1e-4;
  double curvature = 0.9;
};

enum class LbfgsStatus {
  kGradientTolerance,
  kRelativeChange,
  kMaxIterations,
  kLineSearchFailed,
  kInfeasibleStart,
};

const char* to_string(LbfgsStatus s);

struct LbfgsResult {
  RealVector x;
  double value = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  int evaluations = 0;
  LbfgsStatus status = LbfgsStatus::kMaxIterations;

  bool converged() const {
    return status == LbfgsStatus::kGradientTolerance || status == LbfgsStatus::kRelativeChange;
  }
};

// Limited-memory BFGS with a strong-Wolfe line search (bracketing + cubic
// zoom). Deterministic: no internal randomness.
LbfgsResult minimize_lbfgs(const Objective& f, RealVector x0, const LbfgsOptions& options = {});

}  // namespace qtomo
