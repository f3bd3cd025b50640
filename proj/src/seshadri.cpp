#include "poincare/seshadri.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "poincare/error.hpp"
#include "poincare/parallel.hpp"

namespace poincare {

namespace {

/// sinh(rho/2)^2 between z and p, given 1 - |p|^2.
inline double half_sinh2(Complex z, Complex p, double p_defect) noexcept {
  return std::norm(z - p) / (one_minus_norm(z) * p_defect);
}

/// Orbit points of x relevant to centers within `reach` of `center`, with
/// their 1 - |p|^2.
struct OrbitCloud {
  std::vector<Complex> points;
  std::vector<double> defects;

  OrbitCloud(std::span<const Complex> all, Complex center, double reach) {
    for (const Complex& p : all)
      if (hyperbolic_distance(center, p) < reach) {
        points.push_back(p);
        defects.push_back(one_minus_norm(p));
      }
  }

  /// Strict count within r, with the same 1e-12 relative slack as orbit_count.
  std::size_t count(Complex z, double limit2) const noexcept {
    std::size_t n = 0;
    for (std::size_t i = 0; i < points.size(); ++i)
      if (half_sinh2(z, points[i], defects[i]) < limit2) ++n;
    return n;
  }
};

double strict_limit2(double r) {
  const double s = std::sinh(0.5 * r * (1.0 - 1e-12));
  return s * s;
}

double vertex_modulus(const FundamentalDomain& domain) {
  double out = 0.0;
  for (const Complex& v : domain.vertices) out = std::max(out, std::abs(v));
  return out;
}

/// Margin kept around the domain for refined density samples, in units of r.
constexpr double kRefineReach = 0.2;

/// Orbit points of x within circumradius + (1 + kRefineReach) r_max of the
/// domain's center, which covers every center a density scan visits. The
/// ball is grown around the center, where the enumeration prunes best.
std::vector<Complex> orbit_for_domain(const FuchsianGroup& group, const FundamentalDomain& domain, DiscPoint x,
                                      double r_max, const EnumerationOptions& options) {
  const double reach = domain.circumradius + (1.0 + kRefineReach) * r_max + 0.1;
  const double offset = hyperbolic_distance(domain.center, x.value());
  const OrbitBall ball = enumerate_ball(group, DiscPoint(domain.center), reach + offset, options);
  std::vector<Complex> out;
  for (const auto& e : ball.elements) {
    const Complex p = e.element.matrix.apply(x.value());
    if (hyperbolic_distance(domain.center, p) < reach) out.push_back(p);
  }
  return out;
}

DensityReport density_from_points(const FundamentalDomain& domain, Complex x, double r, std::span<const Complex> orbit,
                                  const DensityOptions& options) {
  if (!(r > 0.0)) throw Error(Errc::InvalidArgument, "density radius must be positive");
  if (!(options.spacing_divisor > 0.0) || options.refine_factor < 1)
    throw Error(Errc::InvalidArgument, "density grid options must be positive");
  DensityReport out;
  out.r = r;
  const double rf = vertex_modulus(domain);
  out.spacing = (r / options.spacing_divisor) * (1.0 - rf * rf) / 2.0;
  // Refined samples stay within one spacing of F; bound their reach.
  const double step = 2.0 * out.spacing * std::sqrt(2.0) / ((1.0 - rf) * (1.0 + rf));
  if (step > kRefineReach * r) throw Error(Errc::InvalidArgument, "density refinement reaches past the orbit cover");
  const OrbitCloud cloud(orbit, domain.center, domain.circumradius + step + r + 0.05);
  const double limit2 = strict_limit2(r);

  std::vector<Complex> samples;
  double lo_re = 1.0, hi_re = -1.0, lo_im = 1.0, hi_im = -1.0;
  for (const Complex& v : domain.vertices) {
    lo_re = std::min(lo_re, v.real());
    hi_re = std::max(hi_re, v.real());
    lo_im = std::min(lo_im, v.imag());
    hi_im = std::max(hi_im, v.imag());
  }
  const auto nx = static_cast<std::size_t>(std::ceil((hi_re - lo_re) / out.spacing)) + 1;
  const auto ny = static_cast<std::size_t>(std::ceil((hi_im - lo_im) / out.spacing)) + 1;
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      const Complex z{lo_re + out.spacing * static_cast<double>(i), lo_im + out.spacing * static_cast<double>(j)};
      if (domain.contains(z)) samples.push_back(z);
    }
  for (const Complex& v : domain.vertices) samples.push_back(v);
  // The sup is attained near orbit points for small r; include x itself,
  // reduced into the domain.
  samples.push_back(reduce_to_domain(domain, x).image);
  out.coarse_samples = samples.size();

  std::vector<std::size_t> counts(samples.size());
  parallel::for_each_index(samples.size(), [&](std::size_t i) { counts[i] = cloud.count(samples[i], limit2); });
  std::size_t best = 0;
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (counts[i] > counts[best]) best = i;
  out.coarse_max_count = counts[best];
  out.max_count = counts[best];
  out.argmax = samples[best];

  // One local pass: a finer grid around each coarse maximizer.
  std::vector<Complex> refined;
  for (std::size_t i = 0, taken = 0; i < samples.size() && taken < options.refine_points; ++i) {
    if (counts[i] != out.coarse_max_count) continue;
    ++taken;
    const int f = options.refine_factor;
    const double d = out.spacing / f;
    for (int a = -f; a <= f; ++a)
      for (int b = -f; b <= f; ++b)
        if (a != 0 || b != 0) {
          const Complex z = samples[i] + Complex{a * d, b * d};
          if (DiscPoint::admissible(z)) refined.push_back(z);
        }
  }
  out.refined_samples = refined.size();
  std::vector<std::size_t> rcounts(refined.size());
  parallel::for_each_index(refined.size(), [&](std::size_t i) { rcounts[i] = cloud.count(refined[i], limit2); });
  for (std::size_t i = 0; i < refined.size(); ++i)
    if (rcounts[i] > out.max_count) {
      out.max_count = rcounts[i];
      out.argmax = refined[i];
    }
  out.density = static_cast<double>(out.max_count) / (r * r);
  return out;
}

}  // namespace

CutoffValue cutoff_a(double t) noexcept {
  if (t >= 0.0) return {0.0, 0.0};
  // expm1 keeps a and a' accurate next to 0.
  const double em1 = std::expm1(t);
  return {t - em1, -em1};
}

double cutoff_second(double t) noexcept { return t < 0.0 ? -std::exp(t) : (t == 0.0 ? -1.0 : 0.0); }

double injectivity_radius(const FuchsianGroup& group, DiscPoint x, double margin, const EnumerationOptions& options) {
  if (group.generators.empty()) return std::numeric_limits<double>::infinity();
  // rho_x is constant on orbits: pull x toward the group's center with
  // generator steps first, since balls grown around the center prune best.
  const Complex c = group.center;
  Complex y = x.value();
  for (int step = 0; step < 10000; ++step) {
    Complex best = y;
    for (const auto& g : group.generators)
      for (const Mobius& m : {g.matrix, g.matrix.inverse()}) {
        const Complex cand = m.apply(y);
        if (hyperbolic_distance(c, cand) < hyperbolic_distance(c, best) - 1e-12) best = cand;
      }
    if (best == y) break;
    y = best;
  }
  double d = std::numeric_limits<double>::infinity();
  for (const auto& g : group.generators) d = std::min(d, hyperbolic_distance(y, g.matrix.apply(y)));
  // rho(c, gamma c) <= rho(y, gamma y) + 2 rho(c, y).
  const double offset = hyperbolic_distance(c, y);
  const OrbitBall ball = enumerate_ball(group, DiscPoint(c), d + margin + 2.0 * offset, options);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : ball.elements) {
    if (psu_distance(e.element.matrix, Mobius::identity()) < 1e-9) continue;
    best = std::min(best, hyperbolic_distance(y, e.element.matrix.apply(y)));
  }
  return 0.5 * best;
}

DensityReport density(const FuchsianGroup& group, const FundamentalDomain& domain, DiscPoint x, double r,
                      const DensityOptions& options) {
  if (!(r > 0.0)) throw Error(Errc::InvalidArgument, "density radius must be positive");
  const auto orbit = orbit_for_domain(group, domain, x, r, options.enumeration);
  return density_from_points(domain, x.value(), r, orbit, options);
}

CutoffPotential::CutoffPotential(const FuchsianGroup& group, DiscPoint x, double r, double reach,
                                 const EnumerationOptions& options)
    : CutoffPotential(enumerate_ball(group, x, reach + r, options).orbit_points(), x.value(), r, reach) {}

CutoffPotential::CutoffPotential(std::vector<Complex> orbit_points, Complex x, double r, double reach)
    : points_(std::move(orbit_points)), x_(x), r_(r), reach_(reach) {
  if (!(r > 0.0)) throw Error(Errc::InvalidArgument, "cut-off radius must be positive");
  const double s = std::sinh(0.5 * r);
  sinh2_ = s * s;
}

double CutoffPotential::operator()(Complex z) const {
  if (!DiscPoint::admissible(z)) throw Error(Errc::BoundaryPoint, "psi evaluated on the boundary");
  if (hyperbolic_distance(x_, z) > reach_)
    throw Error(Errc::InsufficientBall, "psi evaluated beyond the precomputed reach");
  double sum = 0.0;
  for (const Complex& p : points_) {
    const double s2 = std::norm(z - p) / (one_minus_norm(z) * one_minus_norm(p));
    if (s2 >= sinh2_) continue;
    const double rho = 2.0 * std::asinh(std::sqrt(s2));
    if (rho < 1e-9) throw Error(Errc::OrbitSingularity, "psi is -infinity on the orbit");
    sum += cutoff_a(2.0 * std::log(rho / r_)).value;
  }
  return sum;
}

std::size_t CutoffPotential::support_count(Complex z) const {
  std::size_t n = 0;
  for (const Complex& p : points_)
    if (std::norm(z - p) / (one_minus_norm(z) * one_minus_norm(p)) < sinh2_) ++n;
  return n;
}

double CutoffPotential::nearest_orbit_point(Complex z) const {
  double best = std::numeric_limits<double>::infinity();
  for (const Complex& p : points_) best = std::min(best, std::abs(z - p));
  return best;
}

double psi_x(const FuchsianGroup& group, DiscPoint x, double r, DiscPoint z) {
  const double reach = distance(x, z);
  return CutoffPotential(group, x, r, reach)(z.value());
}

QuasiPshReport quasi_psh_check(const CutoffPotential& psi, double density, std::span<const Complex> grid,
                               const QuasiPshOptions& options) {
  const double h = options.h;
  if (!(h > 0.0)) throw Error(Errc::InvalidArgument, "finite-difference step must be positive");
  struct Slot {
    bool excluded = true;
    double ddbar = 0.0;
    double tau = 0.0;
    double g = 0.0;
    std::size_t count = 0;
  };
  std::vector<Slot> slots(grid.size());
  const double r2 = psi.r() * psi.r();
  parallel::for_each_index(grid.size(), [&](std::size_t i) {
    const Complex z = grid[i];
    Slot& s = slots[i];
    if (psi.nearest_orbit_point(z) < options.exclusion * h) return;
    s.excluded = false;
    // 9-point Laplacian: (4 (edges) + (corners) - 20 centre) / (6 step^2).
    const double c = psi(z);
    auto laplacian = [&](double step) {
      const double edges = psi(z + step) + psi(z - step) + psi(z + Complex{0.0, step}) + psi(z - Complex{0.0, step});
      const double corners = psi(z + Complex{step, step}) + psi(z + Complex{step, -step}) +
                             psi(z + Complex{-step, step}) + psi(z + Complex{-step, -step});
      return (4.0 * edges + corners - 20.0 * c) / (6.0 * step * step);
    };
    s.ddbar = 0.25 * laplacian(h);
    const double coarse = 0.25 * laplacian(2.0 * h);
    s.g = bergman_metric_unchecked(z);
    s.tau = std::abs(s.ddbar - coarse) + options.relative_floor * (std::abs(s.ddbar) + s.g);
    // Pointwise support over the whole stencil.
    for (int a = -2; a <= 2; a += 2)
      for (int b = -2; b <= 2; b += 2)
        s.count = std::max(s.count, psi.support_count(z + Complex{a * h, b * h}));
  });

  QuasiPshReport out;
  out.r = psi.r();
  out.density = density;
  out.points = grid.size();
  out.min_ratio = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, QuasiPshViolation>> bad;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Slot& s = slots[i];
    if (s.excluded) {
      ++out.excluded;
      continue;
    }
    ++out.checked;
    out.min_ratio = std::min(out.min_ratio, s.ddbar / s.g);
    out.max_tau_ratio = std::max(out.max_tau_ratio, s.tau / s.g);
    const double bound = -2.0 * density * s.g;
    if (s.ddbar < bound - s.tau) {
      ++out.violations;
      bad.push_back({(s.ddbar - bound + s.tau) / s.g, {grid[i], s.ddbar, bound, s.tau}});
    }
    if (s.ddbar < -2.0 * static_cast<double>(s.count) * s.g / r2 - s.tau) ++out.pointwise_violations;
  }
  std::stable_sort(bad.begin(), bad.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 0; i < bad.size() && i < 16; ++i) out.worst.push_back(bad[i].second);
  if (out.checked == 0) out.min_ratio = 0.0;
  out.passed = out.violations == 0;
  return out;
}

SeshadriReport seshadri_lower_bound(const FuchsianGroup& group, const FundamentalDomain& domain, DiscPoint x,
                                    std::span<const double> multipliers, const DensityOptions& options) {
  if (multipliers.empty()) throw Error(Errc::InvalidArgument, "no radius candidates");
  for (double k : multipliers)
    if (!(k > 0.0)) throw Error(Errc::InvalidArgument, "radius multipliers must be positive");
  SeshadriReport out;
  out.x = x.value();
  out.rho_x = injectivity_radius(group, x, 1.0, options.enumeration);
  out.bound_inj = 0.5 * out.rho_x * out.rho_x;
  const double r_max = out.rho_x * *std::max_element(multipliers.begin(), multipliers.end());
  const auto orbit = orbit_for_domain(group, domain, x, r_max, options.enumeration);
  for (double k : multipliers) {
    const DensityReport d = density_from_points(domain, x.value(), k * out.rho_x, orbit, options);
    RadiusCandidate c{d.r, d.density, d.max_count, 0.5 / d.density};
    if (c.bound > out.bound_density) {
      out.bound_density = c.bound;
      out.best_r = c.r;
      out.D_best = c.density;
    }
    out.candidates.push_back(c);
  }
  out.epsilon_lower = std::max(out.bound_inj, out.bound_density);
  return out;
}

GlobalSeshadri seshadri_global(const FuchsianGroup& group, const FundamentalDomain& domain, std::size_t samples,
                               std::uint64_t seed, std::span<const double> multipliers,
                               const DensityOptions& options) {
  if (samples == 0) throw Error(Errc::InvalidArgument, "need at least one sample point");
  std::vector<Complex> xs{domain.center};
  std::mt19937_64 rng(seed);
  const auto& nodes = domain.quadrature.nodes;
  std::uniform_int_distribution<std::size_t> pick(0, nodes.size() - 1);
  while (xs.size() < samples) xs.push_back(nodes[pick(rng)]);
  GlobalSeshadri out;
  out.epsilon_lower = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out.reports.push_back(seshadri_lower_bound(group, domain, DiscPoint(xs[i]), multipliers, options));
    if (out.reports.back().epsilon_lower < out.epsilon_lower) {
      out.epsilon_lower = out.reports.back().epsilon_lower;
      out.argmin = i;
    }
  }
  return out;
}

namespace {

/// Smallest integer m >= 2 with (m - shift) eps > 2n.
int smallest_order(double shift, double eps, int n) {
  const double target = 2.0 * n;
  const double guess = shift + target / eps;
  if (!(guess < 1e9)) throw Error(Errc::InvalidArgument, "epsilon too small for an integer threshold");
  int m = std::max(2, static_cast<int>(std::floor(guess)) - 1);
  while (!((m - shift) * eps > target)) ++m;
  return m;
}

}  // namespace

Thresholds ampleness_thresholds(double epsilon, int n, std::optional<double> C) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw Error(Errc::InvalidArgument, "epsilon must be positive and finite");
  if (n < 1) throw Error(Errc::InvalidArgument, "dimension n must be >= 1");
  Thresholds out;
  out.demailly = smallest_order(1.0, epsilon, n);
  out.main = smallest_order(2.0, epsilon, n);
  if (C) {
    if (!(*C > 0.0) || !std::isfinite(*C)) throw Error(Errc::InvalidArgument, "C must be positive and finite");
    out.df = smallest_order(2.0 - 1.0 / *C, epsilon, n);
  }
  return out;
}

}  // namespace poincare
