#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "poincare/group.hpp"
#include "poincare/quadrature.hpp"
#include "poincare/series.hpp"

namespace poincare {

// Weighted Bergman kernel of weight m on the disc: the reproducing kernel of
// holomorphic f with ||f||_{2,m-1} = int |f|^2 K^{1-m} < infinity, where
// K^{1-m} = pi^{m-1} (1 - |z|^2)^{2m-2}. The monomials are orthogonal with
//   ||z^k||^2 = pi^m int_0^1 s^k (1 - s)^{2m-2} ds = pi^m k! (2m-2)! / (k + 2m - 1)!,
// so K_m(z, w) = sum_k (z conj w)^k / ||z^k||^2
//             = pi^{-m} (2m - 1) sum_k C(k + 2m - 1, k) (z conj w)^k
//             = (2m - 1) / pi^m * (1 - z conj w)^{-2m}.

double weighted_kernel_constant(int m);
double monomial_norm_squared(int m, int k);

/// Closed form, validated inputs.
Complex weighted_kernel(int m, DiscPoint z, DiscPoint w);
inline Complex weighted_kernel_unchecked(int m, Complex z, Complex w) {
  Complex u = 1.0 / (1.0 - z * std::conj(w));
  u *= u;  // (1 - z conj w)^{-2}
  Complex r{1.0, 0.0};
  for (unsigned e = static_cast<unsigned>(m); e; e >>= 1) {
    if (e & 1u) r *= u;
    u *= u;
  }
  return weighted_kernel_constant(m) * r;
}
/// The orthonormal expansion truncated at `degree`, kept as an oracle.
Complex weighted_kernel_series(int m, Complex z, Complex w, int degree = 200);

struct TransformationReport {
  std::size_t samples = 0;
  double max_residual = 0.0;  ///< relative to |K_m(z, w)|
  bool passed = false;
};

/// |K_m(g z, g w) j_g(z)^m conj(j_g(w))^m - K_m(z, w)| / |K_m(z, w)| at
/// `samples` random (g, z, w), g cycling through `elements`, |z|, |w| <= r_max.
TransformationReport kernel_transformation_check(std::span<const GroupElement> elements, int m, std::size_t samples,
                                                 std::uint64_t seed = 1, double r_max = 0.8,
                                                 double tolerance = 1e-10);

struct GramReport {
  double hermitian_defect = 0.0;  ///< max |G_ij - conj(G_ji)|, relative to max |G|
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
};
/// Gram matrix G_ij = K_m(z_i, z_j).
GramReport kernel_gram(int m, std::span<const Complex> points);

struct ReproducingReport {
  Complex value;     ///< int K_m(z, w) conj(h(z)) K(z, z)^{1-m}
  Complex expected;  ///< conj(h(w))
  double relative_error = 0.0;
  double coarse_relative_error = 0.0;  ///< same on the halved grid
  bool halving_ok = false;  ///< error at least halves, or sits at the rounding floor
};

ReproducingReport reproducing_check(int m, const SeedFunction& h, Complex w, const PolarGrid& grid = {});

struct CmReport {
  int m = 0;
  std::vector<Complex> probes;
  std::vector<double> values;  ///< A(w) per probe
  double analytic = 0.0;       ///< (2m - 1) / (m - 1)
  double spread = 0.0;         ///< (max - min) / mean
};

/// A(w) = K(w, w)^{-m/2} int |K_m(z, w)| K(z, z)^{1 - m/2} at each probe.
CmReport cm_constant(int m, std::span<const Complex> probes, const PolarGrid& grid = {});

/// f(z) = int_F h(w) K_m(z, w) K(w, w)^{1-m}, with h sampled on the nodes of
/// a quadrature for F.
class RelativePoincare {
 public:
  RelativePoincare(const Quadrature& region, std::span<const Complex> h, int m);

  Complex operator()(Complex z) const;
  /// sup over the nodes of |h| K^{-m/2}.
  double sup_weighted() const noexcept { return sup_weighted_; }
  int m() const noexcept { return m_; }

 private:
  std::vector<Complex> nodes_;
  std::vector<Complex> coeffs_;  ///< h(w) K(w, w)^{1-m} weight
  int m_;
  double sup_weighted_ = 0.0;
};

/// Truncated P_m of the relative series: sum over the ball of f(g z) j_g(z)^m.
Complex poincare_of(const RelativePoincare& f, const OrbitBall& ball, Complex z);

struct RoundtripPoint {
  Complex z;
  Complex h;
  Complex reconstructed;
  double relative_error = 0.0;
};

struct RoundtripReport {
  int m = 0;
  std::size_t region_nodes = 0;
  std::vector<RoundtripPoint> points;
  double max_relative_error = 0.0;
};

/// h = P_m(f0) truncated to `inner` on the region's nodes; f =
/// RelativePoincare(h); then P_m(f) truncated to `outer` against h at the
/// sample points.
RoundtripReport roundtrip_check(const OrbitBall& inner, const OrbitBall& outer, const Quadrature& region,
                                const SeedFunction& f0, int m, std::span<const Complex> points);

}  // namespace poincare
