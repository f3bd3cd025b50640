#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "poincare/group.hpp"

namespace poincare {

// Orbit-geometric lower bounds for the Seshadri constant of K_X at x, and the
// cut-off potential psi^x(z) = sum over orbit points p of a(log(rho(z, p)^2 / r^2))
// that certifies them.

/// a(t) = 1 + t - e^t for t < 0 and 0 for t >= 0: C^{1,1}, a(0) = a'(0) = 0,
/// a'' = -e^t below 0.
struct CutoffValue {
  double value = 0.0;
  double derivative = 0.0;
};
CutoffValue cutoff_a(double t) noexcept;
/// a''(t); the one-sided value -1 is returned at t = 0 from the left only.
double cutoff_second(double t) noexcept;

/// Half the minimal displacement rho(x, gamma x) over gamma != 1. The minimum
/// is at most the smallest generator displacement d at x, so a ball of
/// radius d + margin at x holds the minimizer.
double injectivity_radius(const FuchsianGroup& group, DiscPoint x, double margin = 1.0,
                          const EnumerationOptions& options = {});

struct DensityOptions {
  /// Grid spacing is (r / spacing_divisor) (1 - R_F^2) / 2, R_F the
  /// Euclidean radius of the domain's farthest vertex.
  double spacing_divisor = 20.0;
  /// Max points (count equal to the running max) refined in the second pass.
  std::size_t refine_points = 64;
  int refine_factor = 4;
  EnumerationOptions enumeration;
};

struct DensityReport {
  double r = 0.0;
  double density = 0.0;        ///< max count / r^2
  std::size_t max_count = 0;
  Complex argmax{0.0, 0.0};
  std::size_t coarse_samples = 0;
  std::size_t refined_samples = 0;
  std::size_t coarse_max_count = 0;  ///< before refinement
  double spacing = 0.0;
};

/// D(r, x) = sup_z #{p in orbit(x) : rho(z, p) < r} / r^2, the sup taken over
/// a grid on the fundamental domain (the count is invariant in z), its
/// vertices and x itself, then refined around the maximizers.
DensityReport density(const FuchsianGroup& group, const FundamentalDomain& domain, DiscPoint x, double r,
                      const DensityOptions& options = {});

/// psi^x with its orbit points precomputed for all z within `reach` of x.
class CutoffPotential {
 public:
  CutoffPotential(const FuchsianGroup& group, DiscPoint x, double r, double reach,
                  const EnumerationOptions& options = {});
  /// For the trivial group and other explicit configurations.
  CutoffPotential(std::vector<Complex> orbit_points, Complex x, double r, double reach);

  /// Throws OrbitSingularity within 1e-9 of an orbit point, where psi = -inf.
  double operator()(Complex z) const;
  /// Number of orbit points with rho(z, p) < r.
  std::size_t support_count(Complex z) const;
  /// Euclidean distance from z to the nearest orbit point.
  double nearest_orbit_point(Complex z) const;

  Complex x() const noexcept { return x_; }
  double r() const noexcept { return r_; }
  double reach() const noexcept { return reach_; }
  const std::vector<Complex>& orbit_points() const noexcept { return points_; }

 private:
  std::vector<Complex> points_;
  Complex x_;
  double r_;
  double reach_;
  double sinh2_;  ///< sinh(r/2)^2
};

/// psi^x(z) from scratch, with a ball of radius rho(x, z) + r.
double psi_x(const FuchsianGroup& group, DiscPoint x, double r, DiscPoint z);

struct QuasiPshOptions {
  double h = 1e-3;
  double exclusion = 10.0;  ///< skip points within exclusion * h of an orbit point
  /// Added to the Richardson term |L_h - L_{2h}|, relative to |L_h| + g.
  double relative_floor = 1e-6;
};

struct QuasiPshViolation {
  Complex z;
  double ddbar = 0.0;
  double bound = 0.0;
  double tau = 0.0;
};

struct QuasiPshReport {
  double r = 0.0;
  double density = 0.0;         ///< D used in the bound -2 D g
  std::size_t points = 0;       ///< grid points supplied
  std::size_t checked = 0;      ///< after exclusion
  std::size_t excluded = 0;
  std::size_t violations = 0;   ///< ddbar < -2 D g - tau
  /// Against the pointwise bound -2 count(z) g / r^2, which the density bound
  /// dominates.
  std::size_t pointwise_violations = 0;
  double min_ratio = 0.0;       ///< min over checked points of ddbar / g
  double max_tau_ratio = 0.0;   ///< max tau / g
  std::vector<QuasiPshViolation> worst;  ///< up to 16 violating points
  bool passed = false;
};

/// d^2 psi / dz dzbar = Laplacian / 4 by the 9-point stencil at spacing h,
/// with tau = |L_h - L_{2h}| + floor as the measured error scale, checked
/// against -2 D g at every point not excluded.
QuasiPshReport quasi_psh_check(const CutoffPotential& psi, double density, std::span<const Complex> grid,
                               const QuasiPshOptions& options = {});

struct RadiusCandidate {
  double r = 0.0;
  double density = 0.0;
  std::size_t count = 0;
  double bound = 0.0;  ///< 1 / (2 D)
};

struct SeshadriReport {
  Complex x{0.0, 0.0};
  double rho_x = 0.0;
  std::vector<RadiusCandidate> candidates;
  double best_r = 0.0;
  double D_best = 0.0;
  double bound_inj = 0.0;      ///< rho_x^2 / 2
  double bound_density = 0.0;  ///< 1 / (2 D_best)
  double epsilon_lower = 0.0;
};

inline const std::vector<double> kDefaultRadiusMultipliers{1.0, 1.25, 1.5, 2.0, 3.0};

/// Both bounds at x; r runs over rho_x times each multiplier.
SeshadriReport seshadri_lower_bound(const FuchsianGroup& group, const FundamentalDomain& domain, DiscPoint x,
                                    std::span<const double> multipliers = kDefaultRadiusMultipliers,
                                    const DensityOptions& options = {});

struct GlobalSeshadri {
  std::vector<SeshadriReport> reports;
  double epsilon_lower = 0.0;  ///< min over the sampled x
  std::size_t argmin = 0;
};

/// The domain's center plus (samples - 1) seeded random points of F.
GlobalSeshadri seshadri_global(const FuchsianGroup& group, const FundamentalDomain& domain, std::size_t samples = 20,
                               std::uint64_t seed = 1,
                               std::span<const double> multipliers = kDefaultRadiusMultipliers,
                               const DensityOptions& options = {});

struct Thresholds {
  int demailly = 0;           ///< smallest m >= 2 with (m - 1) eps > 2n
  int main = 0;               ///< smallest m >= 2 with (m - 2) eps > 2n
  std::optional<int> df;      ///< smallest m >= 2 with (m - 2 + 1/C) eps > 2n
};

Thresholds ampleness_thresholds(double epsilon, int n, std::optional<double> C = std::nullopt);

}  // namespace poincare
