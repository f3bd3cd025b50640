#include "poincare/embedding.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <limits>
#include <random>

#include "poincare/error.hpp"
#include "poincare/parallel.hpp"
#include "poincare/seshadri.hpp"

namespace poincare {

SectionBasis build_basis(const OrbitBall& ball, int m, int d, std::span<const Complex> points) {
  if (m < 2) throw Error(Errc::InvalidArgument, "weight m must be >= 2");
  if (d < 1) throw Error(Errc::InvalidArgument, "seed degree d must be >= 1");
  SectionBasis out;
  out.m = m;
  out.d = d;
  out.radius = ball.radius;
  out.points.assign(points.begin(), points.end());
  out.values.assign(points.size(), std::vector<Complex>(d + 1));
  out.derivatives.assign(points.size(), std::vector<Complex>(d + 1));
  out.tails.assign(points.size(), 0.0);
  std::vector<SeedFunction> seeds;
  for (int k = 0; k <= d; ++k) seeds.push_back(SeedFunction::monomial(k));
  parallel::for_each_index(points.size(), [&](std::size_t i) {
    for (int k = 0; k <= d; ++k) {
      const SeriesValue v = poincare_eval(ball, seeds[k], m, points[i]);
      const SeriesValue dv = poincare_derivative(ball, seeds[k], m, points[i]);
      out.values[i][k] = v.value;
      out.derivatives[i][k] = dv.value;
      out.tails[i] = std::max({out.tails[i], v.tail_estimate, dv.tail_estimate});
    }
  });
  return out;
}

RankResult two_row_rank(std::span<const Complex> row0, std::span<const Complex> row1, double tolerance) {
  if (row0.size() != row1.size() || row0.empty()) throw Error(Errc::InvalidArgument, "rows must match in length");
  const auto n = static_cast<Eigen::Index>(row0.size());
  Eigen::MatrixXcd a(2, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    a(0, k) = row0[k];
    a(1, k) = row1[k];
  }
  for (Eigen::Index r = 0; r < 2; ++r) {
    const double norm = a.row(r).norm();
    if (norm > 0.0) a.row(r) /= norm;
  }
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  RankResult out;
  out.sigma_max = svd.singularValues()(0);
  out.sigma_min = svd.singularValues()(1);
  out.ratio = out.sigma_max > 0.0 ? out.sigma_min / out.sigma_max : 0.0;
  out.passed = out.ratio > tolerance;
  return out;
}

JetResult jet_separation_test(const SectionBasis& basis, std::size_t i, double tolerance) {
  if (i >= basis.points.size()) throw Error(Errc::InvalidArgument, "sample index out of range");
  double vmax = 0.0;
  double dmax = 0.0;
  for (std::size_t k = 0; k < basis.values[i].size(); ++k) {
    vmax = std::max(vmax, std::abs(basis.values[i][k]));
    dmax = std::max(dmax, std::abs(basis.derivatives[i][k]));
  }
  if (!(vmax > 1e-12 * dmax) || vmax == 0.0)
    throw Error(Errc::DegenerateBasis, "every section vanishes at the sample point");
  return {basis.points[i], two_row_rank(basis.values[i], basis.derivatives[i], tolerance)};
}

PointResult point_separation_test(const FuchsianGroup& group, const SectionBasis& basis, std::size_t i,
                                  std::size_t j, double tolerance) {
  if (i >= basis.points.size() || j >= basis.points.size())
    throw Error(Errc::InvalidArgument, "sample index out of range");
  const Complex x = basis.points[i];
  const Complex y = basis.points[j];
  if (orbit_count(group, DiscPoint(x), DiscPoint(y), 1e-6) > 0)
    throw Error(Errc::EquivalentPoints, "the two points lie on one orbit");
  return {x, y, two_row_rank(basis.values[i], basis.values[j], tolerance)};
}

double projective_gap(const SectionBasis& basis, std::size_t i, std::size_t j) {
  return two_row_rank(basis.values[i], basis.values[j]).ratio;
}

ScanReport very_ampleness_scan(const FuchsianGroup& group, const FundamentalDomain& domain,
                               const ScanOptions& options) {
  if (options.samples == 0) throw Error(Errc::InvalidArgument, "need at least one sample");
  ScanReport out;
  out.options = options;
  const OrbitBall ball = enumerate_ball(group, DiscPoint(domain.center), options.radius);

  // Points: samples for the jet tests, then 2 * samples for the pairs.
  std::mt19937_64 rng(options.seed);
  const auto& nodes = domain.quadrature.nodes;
  std::uniform_int_distribution<std::size_t> pick(0, nodes.size() - 1);
  std::vector<Complex> pts;
  for (std::size_t i = 0; i < options.samples; ++i) pts.push_back(nodes[pick(rng)]);
  while (pts.size() < 3 * options.samples) {
    const Complex x = nodes[pick(rng)];
    const Complex y = nodes[pick(rng)];
    if (orbit_count(group, DiscPoint(x), DiscPoint(y), 1e-6) > 0) continue;  // redraw equivalent pairs
    pts.push_back(x);
    pts.push_back(y);
  }
  const SectionBasis basis = build_basis(ball, options.m, options.d, pts);
  for (double t : basis.tails) out.max_tail = std::max(out.max_tail, t);

  out.jets.resize(options.samples);
  out.pairs.resize(options.samples);
  parallel::for_each_index(options.samples, [&](std::size_t i) {
    out.jets[i] = jet_separation_test(basis, i, options.tolerance);
    const std::size_t a = options.samples + 2 * i;
    out.pairs[i] = point_separation_test(group, basis, a, a + 1, options.tolerance);
  });

  std::size_t jet_ok = 0;
  std::size_t pair_ok = 0;
  out.min_jet_ratio = std::numeric_limits<double>::infinity();
  out.min_point_ratio = std::numeric_limits<double>::infinity();
  for (const auto& j : out.jets) {
    jet_ok += j.rank.passed;
    out.min_jet_ratio = std::min(out.min_jet_ratio, j.rank.ratio);
  }
  for (const auto& p : out.pairs) {
    pair_ok += p.rank.passed;
    out.min_point_ratio = std::min(out.min_point_ratio, p.rank.ratio);
  }
  out.jet_pass_rate = static_cast<double>(jet_ok) / static_cast<double>(options.samples);
  out.point_pass_rate = static_cast<double>(pair_ok) / static_cast<double>(options.samples);
  if (options.epsilon) out.predicted_m = ampleness_thresholds(*options.epsilon, 1).main;
  out.passed = jet_ok == options.samples && pair_ok == options.samples;
  return out;
}

}  // namespace poincare
