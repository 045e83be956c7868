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

#include "qtomo/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace qtomo {
namespace {

struct Point {
  double alpha;
  double f;
  double dg;  // directional derivative
};

// Minimizer of the cubic through two points with derivatives, clamped into
// [lo, hi] (in alpha). Falls back to bisection when the cubic degenerates.
double cubic_minimizer(const Point& a, const Point& b, double lo, double hi) {
  const double d1 = a.dg + b.dg - 3.0 * (a.f - b.f) / (a.alpha - b.alpha);
  const double disc = d1 * d1 - a.dg * b.dg;
  double t = 0.5 * (a.alpha + b.alpha);
  if (disc >= 0.0) {
    const double d2 = std::copysign(std::sqrt(disc), b.alpha - a.alpha);
    const double denom = b.dg - a.dg + 2.0 * d2;
    if (denom != 0.0) t = b.alpha - (b.alpha - a.alpha) * (b.dg + d2 - d1) / denom;
  }
  if (!std::isfinite(t)) t = 0.5 * (lo + hi);
  const double margin = 0.1 * (hi - lo);
  return std::clamp(t, lo + margin, hi - margin);
}

struct LineSearch {
  const Objective& f;
  const RealVector& x;
  const RealVector& dir;
  const LbfgsOptions& opt;
  double f0;
  double dg0;
  int evaluations = 0;

  RealVector x_new = RealVector();
  RealVector g_new = RealVector();
  double f_new = 0.0;

  Point eval(double alpha) {
    x_new = x + alpha * dir;
    g_new.resize(x.size());
    f_new = f(x_new, g_new);
    ++evaluations;
    const double dg = std::isfinite(f_new) ? g_new.dot(dir) : std::numeric_limits<double>::quiet_NaN();
    return {alpha, f_new, dg};
  }

  bool sufficient(const Point& p) const { return std::isfinite(p.f) && p.f <= f0 + opt.armijo * p.alpha * dg0; }
  bool curvature_ok(const Point& p) const { return std::abs(p.dg) <= -opt.curvature * dg0; }
  // Near a minimum, f differences drown in rounding long before the gradient
  // does. Accept a point whose value is level with f0 up to rounding when its
  // directional derivative shows progress (approximate Wolfe conditions).
  bool approx_wolfe(const Point& p) const {
    return std::isfinite(p.f) && p.f <= f0 + kLevelTolerance * std::max(1.0, std::abs(f0)) && curvature_ok(p) &&
           p.dg <= -(1.0 - 2.0 * opt.armijo) * dg0;
  }
  static constexpr double kLevelTolerance = 1e-12;

  // Zoom between lo (satisfies Armijo, lower f) and hi.
  bool zoom(Point lo, Point hi) {
    for (int it = 0; it < opt.max_linesearch; ++it) {
      const double a_min = std::min(lo.alpha, hi.alpha);
      const double a_max = std::max(lo.alpha, hi.alpha);
      double alpha = std::isfinite(hi.f) ? cubic_minimizer(lo, hi, a_min, a_max) : 0.5 * (lo.alpha + hi.alpha);
      if (a_max - a_min < 1e-16 * std::max(1.0, a_max)) break;
      const Point p = eval(alpha);
      if (approx_wolfe(p)) return true;
      if (!sufficient(p) || p.f >= lo.f) {
        hi = p;
      } else {
        if (curvature_ok(p)) return true;
        if (p.dg * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
        lo = p;
      }
    }
    // Accept the best Armijo point found, if it improved on the start.
    if (lo.alpha > 0.0 && lo.f < f0) {
      eval(lo.alpha);
      return std::isfinite(f_new);
    }
    return false;
  }

  bool run(double alpha) {
    Point prev{0.0, f0, dg0};
    for (int it = 0; it < opt.max_linesearch; ++it) {
      const Point p = eval(alpha);
      if (!std::isfinite(p.f)) {
        // Infeasible: shrink toward the last feasible point.
        if (prev.alpha > 0.0) return zoom(prev, p);
        alpha *= 0.25;
        continue;
      }
      if (approx_wolfe(p)) return true;
      if (!sufficient(p) || (it > 0 && p.f >= prev.f)) return zoom(prev, p);
      if (curvature_ok(p)) return true;
      if (p.dg >= 0.0) return zoom(p, prev);
      prev = p;
      alpha *= 2.5;
    }
    return false;
  }
};

}  // namespace

const char* to_string(LbfgsStatus s) {
  switch (s) {
    case LbfgsStatus::kGradientTolerance:
      return "gradient_tolerance";
    case LbfgsStatus::kRelativeChange:
      return "relative_change";
    case LbfgsStatus::kMaxIterations:
      return "max_iterations";
    case LbfgsStatus::kLineSearchFailed:
      return "line_search_failed";
    case LbfgsStatus::kInfeasibleStart:
      return "infeasible_start";
  }
  return "unknown";
}

LbfgsResult minimize_lbfgs(const Objective& f, RealVector x0, const LbfgsOptions& options) {
  const Eigen::Index n = x0.size();
  LbfgsResult res;
  res.x = std::move(x0);
  RealVector g(n);
  res.value = f(res.x, g);
  res.evaluations = 1;
  if (!std::isfinite(res.value) || !g.allFinite()) {
    res.status = LbfgsStatus::kInfeasibleStart;
    res.grad_norm = std::numeric_limits<double>::infinity();
    return res;
  }
  res.grad_norm = g.norm();
  if (res.grad_norm < options.grad_tolerance) {
    res.status = LbfgsStatus::kGradientTolerance;
    return res;
  }

  std::deque<RealVector> s_hist, y_hist;
  std::deque<double> rho_hist;
  std::vector<double> alpha_buf(static_cast<std::size_t>(options.memory));
  RealVector dir(n);

  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    // Two-loop recursion.
    dir = -g;
    const std::size_t m = s_hist.size();
    for (std::size_t i = m; i-- > 0;) {
      alpha_buf[i] = rho_hist[i] * s_hist[i].dot(dir);
      dir -= alpha_buf[i] * y_hist[i];
    }
    if (m > 0) dir *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    for (std::size_t i = 0; i < m; ++i) {
      const double beta = rho_hist[i] * y_hist[i].dot(dir);
      dir += (alpha_buf[i] - beta) * s_hist[i];
    }
    double dg = g.dot(dir);
    if (!(dg < 0.0)) {
      // Not a descent direction: reset memory and use steepest descent.
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      dir = -g;
      dg = -g.squaredNorm();
    }
    const double step0 = s_hist.empty() ? std::min(1.0, 1.0 / std::sqrt(-dg)) : 1.0;

    LineSearch ls{f, res.x, dir, options, res.value, dg};
    const bool ok = ls.run(step0);
    res.evaluations += ls.evaluations;
    res.iterations = iter;
    if (!ok) {
      if (!s_hist.empty()) {
        // Retry once along steepest descent before giving up.
        s_hist.clear();
        y_hist.clear();
        rho_hist.clear();
        continue;
      }
      res.status = LbfgsStatus::kLineSearchFailed;
      return res;
    }

    RealVector s = ls.x_new - res.x;
    RealVector y = ls.g_new - g;
    const double f_prev = res.value;
    res.x = std::move(ls.x_new);
    g = std::move(ls.g_new);
    res.value = ls.f_new;
    res.grad_norm = g.norm();

    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (static_cast<int>(s_hist.size()) == options.memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
    }

    if (res.grad_norm < options.grad_tolerance) {
      res.status = LbfgsStatus::kGradientTolerance;
      return res;
    }
    if (std::abs(f_prev - res.value) <= options.rel_tolerance * std::max(1.0, std::abs(res.value))) {
      res.status = LbfgsStatus::kRelativeChange;
      return res;
    }
  }
  res.status = LbfgsStatus::kMaxIterations;
  return res;
}

}  // namespace qtomo
