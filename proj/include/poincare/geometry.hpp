#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "poincare/error.hpp"

namespace poincare {

using Complex = std::complex<double>;

/// Points with |z| >= 1 - kBoundaryGuard are rejected by every checked
/// operation.
inline constexpr double kBoundaryGuard = 1e-12;
/// Allowed defect | |alpha|^2 - |beta|^2 - 1 | for an SU(1,1) matrix.
inline constexpr double kUnitaryTolerance = 1e-10;

// Metric convention (used by every distance, radius and density in the
// library): the Bergman metric coefficient is g = d^2 log K / dz dzbar =
// 2 / (1 - |z|^2)^2 and the Riemannian line element is ds^2 = 2 g |dz|^2 =
// 4 |dz|^2 / (1 - |z|^2)^2, the curvature -1 hyperbolic metric. Under it
//   rho(z, w) = 2 artanh |(z - w) / (1 - conj(w) z)|,
// and |d rho| = 1, so 2 |dbar rho|^2_omega = |d rho|^2_omega = 1.

/// A point of the open unit disc, validated on construction.
class DiscPoint {
 public:
  explicit DiscPoint(Complex z);
  DiscPoint(double re, double im) : DiscPoint(Complex{re, im}) {}

  Complex value() const noexcept { return z_; }
  static bool admissible(Complex z) noexcept { return std::abs(z) < 1.0 - kBoundaryGuard; }

 private:
  Complex z_;
};

/// 1 - |z|^2 without cancellation near the origin.
inline double one_minus_norm(Complex z) noexcept {
  const double r = std::abs(z);
  return (1.0 - r) * (1.0 + r);
}

/// SU(1,1) matrix [[alpha, beta], [conj(beta), conj(alpha)]] acting by
/// z -> (alpha z + beta) / (conj(beta) z + conj(alpha)). Unchecked; used in
/// the hot loops.
struct Mobius {
  Complex alpha{1.0, 0.0};
  Complex beta{0.0, 0.0};

  Complex denominator(Complex z) const noexcept { return std::conj(beta) * z + std::conj(alpha); }
  Complex apply(Complex z) const noexcept { return (alpha * z + beta) / denominator(z); }
  Complex jacobian(Complex z) const noexcept {
    const Complex d = denominator(z);
    return 1.0 / (d * d);
  }
  /// Image of the origin, beta / conj(alpha).
  Complex origin_image() const noexcept { return beta / std::conj(alpha); }

  Mobius inverse() const noexcept { return {std::conj(alpha), -beta}; }
  /// Matrix product, re-normalized onto |alpha|^2 - |beta|^2 = 1.
  Mobius operator*(const Mobius& rhs) const noexcept;
  double unitarity_defect() const noexcept { return std::abs(std::norm(alpha) - std::norm(beta) - 1.0); }
  void normalize() noexcept;

  static Mobius identity() noexcept { return {}; }
  /// z -> e^{i angle} z.
  static Mobius rotation(double angle) noexcept;
  /// Hyperbolic translation along the real diameter moving 0 to tanh(d/2) > 0.
  static Mobius translation(double distance) noexcept;
  /// The automorphism z -> (z - a) / (1 - conj(a) z), sending a to 0.
  static Mobius recentering(Complex a) noexcept;
};

/// Distance between two elements of PSU(1,1): max-norm on (alpha, beta),
/// minimized over the global sign.
double psu_distance(const Mobius& a, const Mobius& b) noexcept;

/// Signed, 1-based generator indices: k means generator k-1, -k its inverse.
using Word = std::vector<int>;

/// Reduces adjacent inverse pairs (k, -k) until none remain.
Word freely_reduce(Word w);

struct GroupElement {
  Mobius matrix;
  Word word;

  static GroupElement identity() { return {}; }
  GroupElement operator*(const GroupElement& rhs) const;
  GroupElement inverse() const;
};

/// gamma(z), rejecting non-unitary matrices and points at the boundary.
DiscPoint mobius_apply(const GroupElement& g, DiscPoint z);
/// j_gamma(z) = gamma'(z) = 1 / (conj(beta) z + conj(alpha))^2.
Complex jacobian(const GroupElement& g, DiscPoint z);

/// Bergman kernel of the disc, K(z, w) = 1 / (pi (1 - z conj(w))^2).
Complex bergman_kernel(DiscPoint z, DiscPoint w);
/// K(z, z) without validation.
inline double bergman_diagonal(Complex z) noexcept {
  const double d = one_minus_norm(z);
  return 1.0 / (std::numbers::pi * d * d);
}

/// g(z) = d^2 log K / dz dzbar = 2 / (1 - |z|^2)^2.
double bergman_metric(DiscPoint z);
inline double bergman_metric_unchecked(Complex z) noexcept {
  const double d = one_minus_norm(z);
  return 2.0 / (d * d);
}

/// Geodesic distance under the metric convention above.
double distance(DiscPoint z, DiscPoint w);
/// sinh(rho / 2) = |z - w| / sqrt((1 - |z|^2)(1 - |w|^2)); accurate both for
/// nearby points and near the boundary.
inline double hyperbolic_distance(Complex z, Complex w) noexcept {
  const double s = std::abs(z - w) / std::sqrt(one_minus_norm(z) * one_minus_norm(w));
  return 2.0 * std::asinh(s);
}
/// rho(0, gamma 0) = 2 asinh |beta| for a unit-normalized matrix.
inline double origin_displacement(const Mobius& m) noexcept { return 2.0 * std::asinh(std::abs(m.beta)); }

/// Poincare disc <-> Klein disc. Geodesics are straight chords in the Klein
/// model; a point at distance d from 0 sits at Klein radius tanh(d).
inline Complex poincare_to_klein(Complex z) noexcept { return 2.0 * z / (1.0 + std::norm(z)); }
inline Complex klein_to_poincare(Complex k) noexcept {
  return k / (1.0 + std::sqrt(std::max(0.0, 1.0 - std::norm(k))));
}

/// |dbar log K|^2_omega at z: |2 z / (1 - |z|^2)|^2 / g(z) = 2 |z|^2.
double df_integrand(Complex z) noexcept;

struct DfConstantReport {
  double grid_supremum = 0.0;      ///< max of the integrand over the radial grid
  double analytic_supremum = 2.0;  ///< lim_{|z| -> 1} 2 |z|^2
  double value_at_center = 0.0;
  double ishi_bound = 2.0;  ///< p + 2q with (p, q) = (0, 1)
  bool within_ishi_bound = true;
  std::size_t grid_points = 0;
};

/// Donnelly-Fefferman constant C(disc) = sup |dbar log K|^2_omega, maximized
/// over a radial grid reaching to the boundary guard.
DfConstantReport df_constant(std::size_t radial_points = 4096);

}  // namespace poincare
