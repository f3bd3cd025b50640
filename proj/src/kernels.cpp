#include "poincare/kernels.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "poincare/error.hpp"
#include "poincare/parallel.hpp"
#include "poincare/summation.hpp"

namespace poincare {

namespace {

constexpr double kPi = std::numbers::pi;

void check_order(int m) {
  if (m < 2) throw Error(Errc::InvalidArgument, "weight m must be >= 2, got " + std::to_string(m));
}

/// K(z, z)^{-1} = pi (1 - |z|^2)^2.
double inverse_diagonal(Complex z) {
  const double d = one_minus_norm(z);
  return kPi * d * d;
}

Complex random_point(std::mt19937_64& rng, double r_max) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = r_max * std::sqrt(u(rng));
  return std::polar(r, 2.0 * kPi * u(rng));
}

}  // namespace

double weighted_kernel_constant(int m) { return (2.0 * m - 1.0) / std::pow(kPi, m); }

double monomial_norm_squared(int m, int k) {
  check_order(m);
  if (k < 0) throw Error(Errc::InvalidArgument, "monomial degree must be >= 0");
  // pi^m (2m-2)! / ((k+1)(k+2)...(k+2m-1)), as a short product of ratios.
  double v = std::pow(kPi, m);
  for (int i = 1; i <= 2 * m - 2; ++i) v *= static_cast<double>(i) / (k + i);
  return v / (k + 2.0 * m - 1.0);
}

Complex weighted_kernel(int m, DiscPoint z, DiscPoint w) {
  check_order(m);
  return weighted_kernel_unchecked(m, z.value(), w.value());
}

Complex weighted_kernel_series(int m, Complex z, Complex w, int degree) {
  check_order(m);
  const Complex x = z * std::conj(w);
  CompensatedComplexSum s;
  Complex p{1.0, 0.0};
  for (int k = 0; k <= degree; ++k) {
    s += p / monomial_norm_squared(m, k);
    p *= x;
  }
  return s.value();
}

TransformationReport kernel_transformation_check(std::span<const GroupElement> elements, int m, std::size_t samples,
                                                 std::uint64_t seed, double r_max, double tolerance) {
  check_order(m);
  if (elements.empty()) throw Error(Errc::InvalidArgument, "no group elements to check");
  std::mt19937_64 rng(seed);
  TransformationReport out;
  out.samples = samples;
  for (std::size_t s = 0; s < samples; ++s) {
    const Mobius& g = elements[s % elements.size()].matrix;
    const Complex z = random_point(rng, r_max);
    const Complex w = random_point(rng, r_max);
    const Complex lhs = weighted_kernel_unchecked(m, g.apply(z), g.apply(w)) * std::pow(g.jacobian(z), m) *
                        std::pow(std::conj(g.jacobian(w)), m);
    const Complex rhs = weighted_kernel_unchecked(m, z, w);
    out.max_residual = std::max(out.max_residual, std::abs(lhs - rhs) / std::abs(rhs));
  }
  out.passed = out.max_residual < tolerance;
  return out;
}

GramReport kernel_gram(int m, std::span<const Complex> points) {
  check_order(m);
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXcd g(n, n);
  double scale = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      g(i, j) = weighted_kernel_unchecked(m, points[i], points[j]);
      scale = std::max(scale, std::abs(g(i, j)));
    }
  GramReport out;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      out.hermitian_defect = std::max(out.hermitian_defect, std::abs(g(i, j) - std::conj(g(j, i))) / scale);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(g, Eigen::EigenvaluesOnly);
  out.min_eigenvalue = eig.eigenvalues().minCoeff();
  out.max_eigenvalue = eig.eigenvalues().maxCoeff();
  return out;
}

ReproducingReport reproducing_check(int m, const SeedFunction& h, Complex w, const PolarGrid& grid) {
  check_order(m);
  if (!DiscPoint::admissible(w)) throw Error(Errc::BoundaryPoint, "reproducing point on the boundary");
  auto integrand = [&](Complex z) {
    return weighted_kernel_unchecked(m, z, w) * std::conj(h(z)) * std::pow(inverse_diagonal(z), m - 1);
  };
  ReproducingReport out;
  out.expected = std::conj(h(w));
  out.value = integrate(grid, integrand);
  const Complex coarse = integrate(grid.halved(), integrand);
  const double scale = std::max(std::abs(out.expected), 1e-300);
  out.relative_error = std::abs(out.value - out.expected) / scale;
  out.coarse_relative_error = std::abs(coarse - out.expected) / scale;
  out.halving_ok = out.relative_error <= std::max(0.5 * out.coarse_relative_error, 1e-12);
  return out;
}

CmReport cm_constant(int m, std::span<const Complex> probes, const PolarGrid& grid) {
  check_order(m);
  CmReport out;
  out.m = m;
  out.analytic = (2.0 * m - 1.0) / (m - 1.0);
  for (Complex w : probes) {
    if (!DiscPoint::admissible(w)) throw Error(Errc::BoundaryPoint, "probe on the boundary");
    const double integral = integrate(grid, [&](Complex z) {
      return std::abs(weighted_kernel_unchecked(m, z, w)) * std::pow(inverse_diagonal(z), 0.5 * m - 1.0);
    });
    out.probes.push_back(w);
    out.values.push_back(std::pow(inverse_diagonal(w), 0.5 * m) * integral);
  }
  if (!out.values.empty()) {
    const auto [lo, hi] = std::minmax_element(out.values.begin(), out.values.end());
    double mean = 0.0;
    for (double v : out.values) mean += v;
    mean /= static_cast<double>(out.values.size());
    out.spread = (*hi - *lo) / mean;
  }
  return out;
}

RelativePoincare::RelativePoincare(const Quadrature& region, std::span<const Complex> h, int m) : m_(m) {
  check_order(m);
  if (h.size() != region.size())
    throw Error(Errc::InvalidArgument, "h has " + std::to_string(h.size()) + " samples for " +
                                           std::to_string(region.size()) + " nodes");
  nodes_ = region.nodes;
  coeffs_.resize(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double inv = inverse_diagonal(nodes_[i]);
    coeffs_[i] = h[i] * std::pow(inv, m - 1) * region.weights[i];
    sup_weighted_ = std::max(sup_weighted_, std::abs(h[i]) * std::pow(inv, 0.5 * m));
  }
}

Complex RelativePoincare::operator()(Complex z) const {
  CompensatedComplexSum s;
  for (std::size_t i = 0; i < nodes_.size(); ++i) s += coeffs_[i] * weighted_kernel_unchecked(m_, z, nodes_[i]);
  return s.value();
}

Complex poincare_of(const RelativePoincare& f, const OrbitBall& ball, Complex z) {
  if (!DiscPoint::admissible(z)) throw Error(Errc::BoundaryPoint, "evaluation point on the boundary");
  std::vector<Complex> terms(ball.size());
  parallel::for_each_index(ball.size(), [&](std::size_t i) {
    const Mobius& g = ball.elements[i].element.matrix;
    terms[i] = f(g.apply(z)) * std::pow(g.jacobian(z), f.m());
  });
  return compensated_sum(terms);
}

RoundtripReport roundtrip_check(const OrbitBall& inner, const OrbitBall& outer, const Quadrature& region,
                                const SeedFunction& f0, int m, std::span<const Complex> points) {
  check_order(m);
  RoundtripReport out;
  out.m = m;
  out.region_nodes = region.size();
  std::vector<Complex> h(region.size());
  parallel::for_each_index(region.size(),
                           [&](std::size_t i) { h[i] = poincare_eval(inner, f0, m, region.nodes[i]).value; });
  const RelativePoincare f(region, h, m);
  for (Complex z : points) {
    RoundtripPoint p;
    p.z = z;
    p.h = poincare_eval(inner, f0, m, z).value;
    p.reconstructed = poincare_of(f, outer, z);
    p.relative_error = std::abs(p.reconstructed - p.h) / std::max(std::abs(p.h), 1e-300);
    out.max_relative_error = std::max(out.max_relative_error, p.relative_error);
    out.points.push_back(p);
  }
  return out;
}

}  // namespace poincare
