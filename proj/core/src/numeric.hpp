#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>

#include <boost/math/tools/minima.hpp>

namespace covert::detail {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// log of exp(-coeff / gap), with the gap <= 0 limit taken as -inf. A zero
/// coefficient gives 0 for any positive gap.
inline double log_kappa(double coeff, double gap) {
  if (!(gap > 0.0)) return -kInf;
  return -coeff / gap;
}

struct ScalarMin {
  double x = 0.0;
  double value = 0.0;
};

/// Minimizes f over [lo, hi]: a uniform grid of grid_points (endpoints
/// included) locates the best cell, then Brent's method polishes inside its
/// two neighbouring cells. The grid optimum is kept if polishing does worse.
template <class F>
ScalarMin minimize_on_interval(F&& f, double lo, double hi, std::size_t grid_points,
                               int bits = 40) {
  ScalarMin best{lo, f(lo)};
  std::size_t best_index = 0;
  const double step = (hi - lo) / static_cast<double>(grid_points - 1);
  for (std::size_t i = 1; i < grid_points; ++i) {
    const double x = (i + 1 == grid_points) ? hi : lo + step * static_cast<double>(i);
    const double value = f(x);
    if (value < best.value) {
      best = {x, value};
      best_index = i;
    }
  }
  if (!(hi > lo)) return best;
  const double left = best_index == 0 ? lo : lo + step * static_cast<double>(best_index - 1);
  const double right = std::min(hi, lo + step * static_cast<double>(best_index + 1));
  auto polished = boost::math::tools::brent_find_minima(f, left, right, bits);
  if (polished.second < best.value) best = {polished.first, polished.second};
  return best;
}

}  // namespace covert::detail
