#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <string>
#include <numbers>
#include <type_traits>
#include <vector>

#include "poincare/error.hpp"
#include "poincare/geometry.hpp"
#include "poincare/parallel.hpp"
#include "poincare/summation.hpp"

namespace poincare {

/// Nodes and positive weights for Lebesgue-measure integration.
struct Quadrature {
  std::vector<Complex> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
  double total_weight() const;
};

/// Polar product grid over the whole disc. Radial nodes are midpoints in u
/// mapped by r = 1 - (1 - u)^3, which clusters them toward the boundary where
/// the integrands carry powers of (1 - r^2); angular nodes are midpoints
/// (the periodic trapezoid rule).
struct PolarGrid {
  std::size_t radial = 800;
  std::size_t angular = 512;

  double radius(std::size_t i) const noexcept {
    const double s = 1.0 - (static_cast<double>(i) + 0.5) / static_cast<double>(radial);
    return 1.0 - s * s * s;
  }
  /// r dr/du du, the radial part of the area element.
  double radial_weight(std::size_t i) const noexcept {
    const double s = 1.0 - (static_cast<double>(i) + 0.5) / static_cast<double>(radial);
    return radius(i) * 3.0 * s * s / static_cast<double>(radial);
  }
  double angle(std::size_t j) const noexcept {
    return 2.0 * std::numbers::pi * (static_cast<double>(j) + 0.5) / static_cast<double>(angular);
  }
  double angular_weight() const noexcept { return 2.0 * std::numbers::pi / static_cast<double>(angular); }
  Complex node(std::size_t i, std::size_t j) const noexcept { return std::polar(radius(i), angle(j)); }
  std::size_t size() const noexcept { return radial * angular; }
  PolarGrid halved() const noexcept { return {radial / 2, angular / 2}; }

  Quadrature quadrature() const;
};

namespace detail {
template <class T>
using SumFor = std::conditional_t<std::is_same_v<T, double>, CompensatedSum, CompensatedComplexSum>;

inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}
}

/// Integral of fn over the disc on the grid. Ring sums are computed in
/// parallel and reduced in ring order, so the result is independent of the
/// thread count.
template <class Fn>
auto integrate(const PolarGrid& grid, Fn&& fn) {
  using T = std::decay_t<decltype(fn(Complex{}))>;
  std::vector<T> rings(grid.radial);
  parallel::for_each_index(grid.radial, [&](std::size_t i) {
    detail::SumFor<T> s;
    for (std::size_t j = 0; j < grid.angular; ++j) s += fn(grid.node(i, j));
    rings[i] = s.value() * (grid.radial_weight(i) * grid.angular_weight());
  });
  detail::SumFor<T> total;
  for (const T& v : rings) total += v;
  return total.value();
}

/// Integral over an arbitrary node set, reduced in node order.
template <class Fn>
auto integrate(const Quadrature& q, Fn&& fn) {
  using T = std::decay_t<decltype(fn(Complex{}))>;
  std::vector<T> terms(q.size());
  parallel::for_each_index(q.size(), [&](std::size_t i) { terms[i] = fn(q.nodes[i]) * q.weights[i]; });
  detail::SumFor<T> total;
  for (const T& v : terms) total += v;
  return total.value();
}

template <class T>
struct QuadratureEstimate {
  T value{};
  T coarse{};            ///< same integral on the halved grid
  double error = 0.0;    ///< |value - coarse| / 3, the midpoint-rule Richardson estimate
  PolarGrid grid;
};

/// Integrates on the grid and three successive halvings. Throws
/// QuadratureDiverged when the finest halving step exceeds both coarser steps
/// (one of them can vanish by accident) and a relative floor of 1e-9.
template <class Fn>
auto integrate_with_estimate(const PolarGrid& grid, Fn&& fn) {
  using T = std::decay_t<decltype(fn(Complex{}))>;
  if (grid.radial < 16 || grid.angular < 16 || grid.radial % 8 != 0 || grid.angular % 8 != 0)
    throw Error(Errc::InvalidArgument, "polar grid sizes must be multiples of 8 and at least 16");
  QuadratureEstimate<T> out;
  out.grid = grid;
  out.value = integrate(grid, fn);
  out.coarse = integrate(grid.halved(), fn);
  const T quarter = integrate(grid.halved().halved(), fn);
  const T eighth = integrate(grid.halved().halved().halved(), fn);
  const double fine_step = std::abs(out.value - out.coarse);
  const double coarse_step = std::max(std::abs(out.coarse - quarter), std::abs(quarter - eighth));
  const double floor = 1e-9 * std::abs(out.value) + 1e-300;
  if (fine_step > floor && fine_step > coarse_step)
    throw Error(Errc::QuadratureDiverged, "grid halving difference grew from " + detail::sci(coarse_step) +
                                              " to " + detail::sci(fine_step) + " (value " +
                                              detail::sci(std::abs(out.value)) + ")");
  out.error = fine_step / 3.0;
  return out;
}

}  // namespace poincare
