#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

#include "vecirs/optimizer.hpp"

namespace vecirs::detail {

/// Non-throwing form of energy_split_bounds; nullopt when infeasible.
std::optional<SplitBounds> feasible_split_bounds(const TaskSpec& task, double local_cpu,
                                                 double tx_power, double rate, double kappa,
                                                 double energy_budget);

/// Minimizer of a unimodal function on [lo, hi].
template <typename F>
double golden_section_min(F&& f, double lo, double hi, int iterations = 64) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iterations && b - a > 0.0; ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  // The bracket endpoints may beat the interior probes on monotone costs.
  double best = fc <= fd ? c : d;
  double fbest = std::min(fc, fd);
  if (f(lo) <= fbest) { best = lo; fbest = f(lo); }
  if (f(hi) < fbest) best = hi;
  return best;
}

/// Minimizer over [lo, hi] of a function that need not be unimodal: the best
/// of `samples` + 1 evenly spaced points, refined by golden section between
/// its neighbours.
template <typename F>
double scanned_min(F&& f, double lo, double hi, int samples = 32, int iterations = 48) {
  const double step = (hi - lo) / samples;
  int best = 0;
  double fbest = f(lo);
  for (int i = 1; i <= samples; ++i) {
    const double v = f(lo + step * i);
    if (v < fbest) {
      fbest = v;
      best = i;
    }
  }
  const double a = lo + step * std::max(best - 1, 0);
  const double b = best == samples ? hi : lo + step * (best + 1);
  const double x = golden_section_min(f, a, b, iterations);
  return f(x) <= fbest ? x : lo + step * best;
}

/// Smallest x in [0, hi] with pred(x) true, for pred monotone in x; assumes
/// pred(hi) holds. Returns an x at which pred holds.
template <typename P>
double bisect_threshold(P&& pred, double hi, int iterations = 100) {
  if (pred(0.0)) return 0.0;
  double lo = 0.0;
  for (int i = 0; i < iterations && hi - lo > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (pred(mid)) hi = mid;
    else lo = mid;
  }
  return hi;
}

}  // namespace vecirs::detail
