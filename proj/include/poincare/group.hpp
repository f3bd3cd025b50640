#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "poincare/geometry.hpp"
#include "poincare/quadrature.hpp"

namespace poincare {

/// A finitely generated group of disc automorphisms. Generator k carries the
/// word {k + 1}.
struct FuchsianGroup {
  std::string name;
  std::vector<GroupElement> generators;
  std::vector<Word> relators;
  /// Reference point used to prune ball enumeration. Its Dirichlet domain
  /// must be bounded by bisectors of generator images (true for side-pairing
  /// generators, e.g. the octagon preset about 0).
  Complex center{0.0, 0.0};

  GroupElement evaluate(const Word& word) const;
  /// max over relators of the PSU(1,1) distance between the relator product
  /// and the identity.
  double relator_residual() const;
  /// s_max: largest generator displacement of `center`.
  double max_generator_displacement() const;
  /// d_0 at x: smallest generator displacement rho(x, g x).
  double min_generator_displacement(Complex x) const;

  static FuchsianGroup trivial();
};

/// Genus-2 surface group of the regular hyperbolic octagon with interior
/// angles pi/4: eight side pairings T_k = R^k T R^{-k}, R the rotation by
/// pi/4 and T the translation by 2 arccosh(1 + sqrt 2) (so T_{k+4} =
/// T_k^{-1}), with the relator T_0 T_3 T_6 T_1 T_4 T_7 T_2 T_5 = 1, i.e.
/// a b c d a^-1 b^-1 c^-1 d^-1 for (a, b, c, d) = (T_0, T_3, T_6, T_1).
FuchsianGroup preset_genus2_octagon();
/// "genus2" / "genus2-octagon" / "trivial"; throws ConfigError otherwise.
FuchsianGroup group_preset(const std::string& name);

/// Plain-text key-value group description:
///   name = <label>
///   center = <re> <im>                       (optional)
///   generator.<k> = <re a> <im a> <re b> <im b>   (k = 0, 1, ...)
///   relator = <signed 1-based generator indices>
/// '#' starts a comment. Errors carry line numbers.
FuchsianGroup parse_group_config(std::istream& in);
FuchsianGroup load_group_config(const std::string& path);
std::string format_group_config(const FuchsianGroup& group);

struct OrbitElement {
  GroupElement element;
  double displacement = 0.0;  ///< rho(x, gamma x)
};

/// All gamma with rho(x, gamma x) <= radius, identity first, sorted by
/// displacement (ties by discovery order).
struct OrbitBall {
  Complex base{0.0, 0.0};
  double radius = 0.0;
  std::vector<OrbitElement> elements;
  std::size_t explored = 0;  ///< BFS nodes visited, including pruning slack

  std::size_t size() const noexcept { return elements.size(); }
  /// Orbit points gamma(base), in element order.
  std::vector<Complex> orbit_points() const;
};

struct EnumerationOptions {
  std::size_t budget = 5'000'000;
  double dedup_tolerance = 1e-9;
};

/// Breadth-first search over words. Distances are measured at the group's
/// center c, and a node is expanded only while rho(c, gamma c) <= R' + s_max
/// with R' = R + 2 rho(x, c); the result is filtered to rho(x, gamma x) <= R.
/// Elements are deduplicated in PSU(1,1).
OrbitBall enumerate_ball(const FuchsianGroup& group, DiscPoint x, double radius,
                         const EnumerationOptions& options = {});

/// A side of a Dirichlet polygon: the bisector between the center x and the
/// orbit point pairing(x). In the recentered Klein frame (x at 0) the side is
/// the chord Re(k conj(normal)) = offset.
struct DomainSide {
  GroupElement pairing;
  Complex normal;
  double offset = 0.0;
};

struct FundamentalDomain {
  Complex center{0.0, 0.0};
  Mobius to_frame;  ///< sends center to 0
  std::vector<DomainSide> sides;
  std::vector<Complex> vertices;  ///< disc coordinates, counter-clockwise
  std::vector<Complex> klein_vertices;  ///< same vertices in the recentered Klein frame
  double circumradius = 0.0;      ///< max rho(center, vertex)
  double euclidean_area = 0.0;
  double ball_radius = 0.0;  ///< orbit ball radius the polygon was cut from
  double grid_spacing = 0.0;
  Quadrature quadrature;

  /// max over sides of the Klein-frame violation; <= 0 inside.
  double violation(Complex z) const noexcept;
  bool contains(Complex z, double slack = 0.0) const noexcept { return violation(z) <= slack; }
  /// Boundary polyline in disc coordinates, `per_side` points per side.
  std::vector<Complex> boundary_samples(std::size_t per_side) const;
};

struct DomainOptions {
  double grid_spacing = 0.004;
  double margin = 1.0;
  int max_retries = 4;
  /// Sub-samples per axis used to weight cells cut by the boundary.
  int boundary_subsamples = 8;
  EnumerationOptions enumeration;
};

/// Intersects the half-planes {z : rho(z, x) <= rho(z, gamma x)} over an
/// orbit ball of radius 2 d_0 + margin, enlarging the ball until it covers
/// twice the circumradius (InsufficientBall after max_retries), and clips a
/// Cartesian grid to the polygon.
FundamentalDomain dirichlet_domain(const FuchsianGroup& group, DiscPoint x, const DomainOptions& options = {});

/// Quadrature for a polygon given only by a membership test: the regular grid
/// of spacing h over the box, with cells cut by the boundary weighted by
/// sub-sampling.
Quadrature clipped_grid(const FundamentalDomain& domain, double spacing, int subsamples);

struct Reduction {
  GroupElement element;  ///< element(z) lies in the domain
  Complex image;
  int steps = 0;
};

/// Greedy reduction into the Dirichlet domain: while z is beyond some side,
/// apply that side's pairing inverse (each step strictly decreases rho(z, x)).
Reduction reduce_to_domain(const FundamentalDomain& domain, Complex z, int max_steps = 100000);

/// #{gamma x : rho(gamma x, z) < r}, using a ball of radius rho(x, z) + r.
std::size_t orbit_count(const FuchsianGroup& group, DiscPoint x, DiscPoint z, double r,
                        const EnumerationOptions& options = {});
/// Same count against precomputed orbit points; the caller guarantees the
/// ball covers rho(x, z) + r. Strictness is applied with a relative slack of
/// 1e-12 so that points at distance exactly r are not counted.
std::size_t orbit_count(std::span<const Complex> orbit_points, Complex z, double r);

struct TilingReport {
  std::size_t samples = 0;
  std::size_t exactly_one = 0;
  std::size_t none = 0;
  std::size_t multiple = 0;
  double ball_radius = 0.0;
};

/// For each point, counts the ball elements mapping it into the domain.
TilingReport tiling_check(const FuchsianGroup& group, const FundamentalDomain& domain,
                          std::span<const Complex> points);

/// Minimum of rho(gamma z, z) over non-identity ball elements and the given
/// points; a positive value certifies no sampled fixed points.
double min_fixed_point_distance(const OrbitBall& ball, std::span<const Complex> points);

}  // namespace poincare
