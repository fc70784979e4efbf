#pragma once

// Adaptive Dormand-Prince 5(4) stepper with mandatory step boundaries.
//
// Works on any Eigen column vector (real or complex). The right-hand side is
// called as rhs(piece, t, y, dydt), where `piece` is the smooth segment
// between two breakpoints that contains the step; stage evaluations at the
// segment ends therefore see one-sided limits of a discontinuous RHS.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "qres/errors.hpp"

namespace qres {

struct StepperOptions {
  double atol = 1e-10;
  double rtol = 1e-10;
  double dt_max = std::numeric_limits<double>::infinity();
  /// When positive, take steps of exactly this size (clipped at stops and
  /// breakpoints) with no error control. The step mesh is then independent of
  /// the solution, which finite-difference oracles rely on.
  double fixed_step = 0.0;
  long max_steps = 20'000'000;
};

struct Piece {
  double lo;
  double hi;
  double mid() const { return 0.5 * (lo + hi); }
};

struct StepperStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_calls = 0;
};

namespace detail {

template <class Vec>
double scaled_error(const Vec& err, const Vec& y0, const Vec& y1, double atol, double rtol) {
  using std::abs;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double scale = atol + rtol * std::max(abs(y0[i]), abs(y1[i]));
    worst = std::max(worst, abs(err[i]) / scale);
  }
  return worst;
}

template <class Vec>
bool all_finite(const Vec& v) {
  using std::isfinite;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!isfinite(std::abs(v[i]))) return false;
  }
  return true;
}

}  // namespace detail

/// Integrates y from t0 through every time in `stops` (sorted, all >= t0),
/// never stepping across a time in `breakpoints`. `observe(i, t, y)` fires at
/// each stop. On return `y` holds the state at stops.back().
template <class Vec, class Rhs, class Observer>
StepperStats integrate(Rhs&& rhs, Vec& y, double t0, std::span<const double> stops,
                       std::span<const double> breakpoints, const StepperOptions& opt,
                       Observer&& observe) {
  // Dormand-Prince 5(4) tableau.
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  // b - b_hat
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  StepperStats stats;
  if (stops.empty()) return stats;
  if (stops.front() < t0) throw Error(ErrorKind::domain, "integrate: stop before start time");
  for (std::size_t i = 1; i < stops.size(); ++i) {
    if (stops[i] < stops[i - 1]) throw Error(ErrorKind::domain, "integrate: stops must be sorted");
  }
  const double t_final = stops.back();

  std::vector<double> cuts;
  for (double b : breakpoints) {
    if (b > t0 && b < t_final) cuts.push_back(b);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  Vec k1(y), k2(y), k3(y), k4(y), k5(y), k6(y), k7(y), tmp(y), y_new(y), err(y);

  double t = t0;
  std::size_t next_stop = 0;
  while (next_stop < stops.size() && stops[next_stop] <= t) {
    observe(next_stop, t, y);
    ++next_stop;
  }

  double h = opt.fixed_step > 0.0 ? opt.fixed_step : 0.0;
  std::size_t next_cut = 0;
  while (next_stop < stops.size()) {
    const Piece piece{t, next_cut < cuts.size() ? cuts[next_cut] : t_final};
    rhs(piece, t, y, k1);
    ++stats.rhs_calls;

    if (h == 0.0) {
      // Hairer's starting-step heuristic.
      const double d0 = detail::scaled_error(y, y, y, opt.atol, opt.rtol);
      const double d1 = detail::scaled_error(k1, y, y, opt.atol, opt.rtol);
      h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
      h = std::min({h, opt.dt_max, piece.hi - piece.lo});
    }

    while (t < piece.hi) {
      const double target = std::min(piece.hi, stops[next_stop]);
      double step = std::min(h, opt.dt_max);
      bool lands = false;
      if (t + step >= target - 1e-14 * std::max(1.0, std::abs(target))) {
        step = target - t;
        lands = true;
      }
      if (++stats.accepted + stats.rejected > opt.max_steps) {
        throw Error(ErrorKind::step_failure, "integrate: step budget exhausted");
      }

      tmp.noalias() = y + step * (a21 * k1);
      rhs(piece, t + c2 * step, tmp, k2);
      tmp.noalias() = y + step * (a31 * k1 + a32 * k2);
      rhs(piece, t + c3 * step, tmp, k3);
      tmp.noalias() = y + step * (a41 * k1 + a42 * k2 + a43 * k3);
      rhs(piece, t + c4 * step, tmp, k4);
      tmp.noalias() = y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      rhs(piece, t + c5 * step, tmp, k5);
      tmp.noalias() = y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      const double t_next = lands ? target : t + step;
      rhs(piece, t_next, tmp, k6);
      y_new.noalias() = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      rhs(piece, t_next, y_new, k7);
      stats.rhs_calls += 6;

      double factor = 1.0;
      bool accept = true;
      if (opt.fixed_step <= 0.0) {
        err.noalias() = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        double norm = detail::scaled_error(err, y, y_new, opt.atol, opt.rtol);
        if (!std::isfinite(norm)) norm = 1e10;
        accept = norm <= 1.0;
        factor = norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
        if (accept) factor = std::min(factor, 5.0);
        else factor = std::min(factor, 0.9);
      }

      if (!accept) {
        --stats.accepted;
        ++stats.rejected;
        h = step * factor;
        if (h < 1e-13 * std::max(1.0, std::abs(t))) {
          throw Error(ErrorKind::step_failure,
                      "integrate: step size underflow at t = " + std::to_string(t));
        }
        continue;
      }
      if (!detail::all_finite(y_new)) {
        throw Error(ErrorKind::step_failure, "integrate: non-finite state at t = " + std::to_string(t));
      }

      y.swap(y_new);
      k1.swap(k7);
      t = t_next;
      if (opt.fixed_step <= 0.0 && !(lands && step < h)) h = step * factor;
      else if (opt.fixed_step <= 0.0) h = std::max(h, step * factor);

      while (next_stop < stops.size() && stops[next_stop] <= t) {
        observe(next_stop, t, y);
        ++next_stop;
      }
      if (next_stop >= stops.size()) break;
    }
    if (next_cut < cuts.size() && t >= cuts[next_cut]) ++next_cut;
  }
  return stats;
}

/// Convenience overload without a per-stop callback.
template <class Vec, class Rhs>
StepperStats integrate(Rhs&& rhs, Vec& y, double t0, std::span<const double> stops,
                       std::span<const double> breakpoints, const StepperOptions& opt) {
  return integrate(std::forward<Rhs>(rhs), y, t0, stops, breakpoints, opt,
                   [](std::size_t, double, const Vec&) {});
}

}  // namespace qres
