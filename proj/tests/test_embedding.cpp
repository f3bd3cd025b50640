#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "poincare/embedding.hpp"
#include "poincare/seshadri.hpp"
#include "test_util.hpp"

using namespace poincare;
using poincare::testing::random_disc_point;

namespace {

const FuchsianGroup& octagon() {
  static const FuchsianGroup g = preset_genus2_octagon();
  return g;
}

const FundamentalDomain& octagon_domain() {
  static const FundamentalDomain f = dirichlet_domain(octagon(), DiscPoint(0.0, 0.0));
  return f;
}

const OrbitBall& ball10() {
  static const OrbitBall b = enumerate_ball(octagon(), DiscPoint(0.0, 0.0), 10.0);
  return b;
}

std::vector<Complex> domain_samples(std::size_t stride) {
  std::vector<Complex> out;
  const auto& nodes = octagon_domain().quadrature.nodes;
  for (std::size_t i = 0; i < nodes.size(); i += stride) out.push_back(nodes[i]);
  return out;
}

}  // namespace

TEST_CASE("trivial group: the basis is the monomials") {
  const OrbitBall triv = enumerate_ball(FuchsianGroup::trivial(), DiscPoint(0.0, 0.0), 3.0);
  std::mt19937_64 rng(1);
  std::vector<Complex> pts;
  for (int i = 0; i < 100; ++i) pts.push_back(random_disc_point(rng, 0.9));
  for (int m : {2, 3, 5}) {
    for (int d : {1, 3, 6}) {
      const SectionBasis b = build_basis(triv, m, d, pts);
      for (std::size_t i = 0; i < pts.size(); ++i)
        for (int k = 0; k <= d; ++k) {
          CHECK(std::abs(b.values[i][k] - std::pow(pts[i], k)) <= 1e-14);
          const Complex dk = k == 0 ? Complex{0.0, 0.0} : static_cast<double>(k) * std::pow(pts[i], k - 1);
          CHECK(std::abs(b.derivatives[i][k] - dk) <= 1e-13);
        }
      std::size_t jets = 0;
      std::size_t pairs = 0;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        jets += jet_separation_test(b, i).rank.passed;
        pairs += point_separation_test(FuchsianGroup::trivial(), b, i, (i + 1) % pts.size()).rank.passed;
      }
      CHECK(jets == pts.size());
      CHECK(pairs == pts.size());
    }
  }
  CHECK_THROWS_AS(build_basis(triv, 1, 3, pts), Error);
  CHECK_THROWS_AS(build_basis(triv, 3, 0, pts), Error);
}

TEST_CASE("basis derivatives match central differences") {
  const std::vector<Complex> pts{{0.0, 0.0}, {0.3, -0.2}, {-0.5, 0.4}, {0.6, 0.1}, {0.1, 0.7}};
  const double h = 1e-5;
  for (int m : {3, 4}) {
    const SectionBasis b = build_basis(ball10(), m, 6, pts);
    std::vector<Complex> shifted;
    for (Complex z : pts) {
      shifted.push_back(z + h);
      shifted.push_back(z - h);
    }
    const SectionBasis s = build_basis(ball10(), m, 6, shifted);
    double worst = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (int k = 0; k <= 6; ++k) {
        const Complex fd = (s.values[2 * i][k] - s.values[2 * i + 1][k]) / (2.0 * h);
        worst = std::max(worst, std::abs(fd - b.derivatives[i][k]) / std::max(1.0, std::abs(b.derivatives[i][k])));
      }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("numerical rank of the sections is the Riemann-Roch dimension") {
  // On a genus-2 surface dim H^0(mK) = (2m - 1)(g - 1) = 2m - 1 for m >= 2;
  // with d = 10 there are more seeds than sections, so the value matrix
  // over F has a gap after 2m - 1 singular values.
  const auto pts = domain_samples(1000);
  for (int m : {3, 4}) {
    const SectionBasis b = build_basis(ball10(), m, 10, pts);
    Eigen::MatrixXcd a(static_cast<Eigen::Index>(pts.size()), 11);
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (int k = 0; k <= 10; ++k) a(static_cast<Eigen::Index>(i), k) = b.values[i][k];
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
    const auto& sv = svd.singularValues();
    const int dim = 2 * m - 1;
    CHECK(sv(dim - 1) / sv(0) > 1e-2);
    CHECK(sv(dim) / sv(0) < 1e-5);
    // At most d + 1 sections: the rank of a d = 3 basis is at most 4.
    const SectionBasis small = build_basis(ball10(), m, 3, pts);
    Eigen::MatrixXcd s(static_cast<Eigen::Index>(pts.size()), 4);
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (int k = 0; k <= 3; ++k) s(static_cast<Eigen::Index>(i), k) = small.values[i][k];
    CHECK(Eigen::JacobiSVD<Eigen::MatrixXcd>(s).rank() <= 4);
    MESSAGE("m=" << m << " sigma_" << dim << "/sigma_1 = " << sv(dim - 1) / sv(0) << ", next "
                 << sv(dim) / sv(0));
  }
}

TEST_CASE("sections are automorphic and tests are invariant under the group") {
  const int m = 4;
  const std::vector<Complex> xs{{0.1, 0.05}, {-0.2, 0.3}, {0.35, -0.1}};
  std::vector<Complex> pts;
  std::vector<Complex> factors;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Mobius& g = octagon().generators[i].matrix;
    pts.push_back(xs[i]);
    pts.push_back(g.apply(xs[i]));
    factors.push_back(std::pow(g.jacobian(xs[i]), m));
  }
  const SectionBasis b = build_basis(ball10(), m, 6, pts);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    // P(g x) j_g(x)^m = P(x), seed by seed, within the truncation tails.
    for (int k = 0; k <= 6; ++k)
      CHECK(std::abs(b.values[2 * i + 1][k] * factors[i] - b.values[2 * i][k]) <=
            2.0 * (b.tails[2 * i] + std::abs(factors[i]) * b.tails[2 * i + 1]) + 1e-12);
    // Same projective image, and the point test refuses the pair.
    CHECK(projective_gap(b, 2 * i, 2 * i + 1) < 1e-6);
    CHECK_THROWS_AS(point_separation_test(octagon(), b, 2 * i, 2 * i + 1), Error);
    // Jet rank decision unchanged.
    const JetResult at_x = jet_separation_test(b, 2 * i);
    const JetResult at_gx = jet_separation_test(b, 2 * i + 1);
    CHECK(at_x.rank.passed);
    CHECK(at_gx.rank.passed == at_x.rank.passed);
  }
  try {
    point_separation_test(octagon(), b, 0, 1);
    FAIL("expected EquivalentPoints");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::EquivalentPoints);
  }
}

TEST_CASE("rank decisions") {
  const std::vector<Complex> r0{1.0, 2.0, 3.0};
  const std::vector<Complex> par{2.0, 4.0, 6.0};
  const std::vector<Complex> ind{0.0, 1.0, 0.5};
  CHECK_FALSE(two_row_rank(r0, par).passed);
  CHECK(two_row_rank(r0, par).ratio < 1e-15);
  CHECK(two_row_rank(r0, ind).passed);
  // Stable under column rescaling and row scaling.
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  for (int t = 0; t < 50; ++t) {
    std::vector<Complex> a(7), b(7);
    for (int k = 0; k < 7; ++k) {
      a[k] = Complex{u(rng) - 5.0, u(rng) - 5.0};
      b[k] = (t % 2 ? 3.0 : 1.0) * a[k] + (t % 2 ? 0.0 : 1e-3) * Complex{u(rng), 0.0};
    }
    const bool before = two_row_rank(a, b).passed;
    for (int k = 0; k < 7; ++k) {
      const double c = u(rng);
      a[k] *= c;
      b[k] *= c * 1e3;
    }
    CHECK(two_row_rank(a, b).passed == before);
  }
  // A basis vanishing at the sample is degenerate.
  SectionBasis zero;
  zero.m = 4;
  zero.d = 2;
  zero.points = {0.0};
  zero.values = {{0.0, 0.0, 0.0}};
  zero.derivatives = {{1.0, 0.0, 0.0}};
  zero.tails = {0.0};
  try {
    jet_separation_test(zero, 0);
    FAIL("expected DegenerateBasis");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DegenerateBasis);
  }
}

TEST_CASE("very-ampleness scan on the octagon group") {
  const double eps = 0.5 * std::pow(injectivity_radius(octagon(), DiscPoint(0.0, 0.0)), 2);
  ScanOptions opts;
  opts.samples = 30;
  opts.epsilon = eps;
  opts.m = ampleness_thresholds(eps, 1).main;
  CHECK(opts.m == 4);
  const ScanReport at_threshold = very_ampleness_scan(octagon(), octagon_domain(), opts);
  REQUIRE(at_threshold.predicted_m.has_value());
  CHECK(*at_threshold.predicted_m == 4);
  CHECK(at_threshold.jets.size() == 30);
  CHECK(at_threshold.pairs.size() == 30);
  CHECK(at_threshold.jet_pass_rate == 1.0);
  CHECK(at_threshold.point_pass_rate == 1.0);
  CHECK(at_threshold.passed);
  CHECK(at_threshold.min_jet_ratio > kRankTolerance);
  MESSAGE("m=4: min jet ratio " << at_threshold.min_jet_ratio << ", min point ratio "
                               << at_threshold.min_point_ratio << ", max tail " << at_threshold.max_tail);

  // More seeds never lose a pass at the same samples.
  ScanOptions fewer = opts;
  fewer.d = 3;
  const ScanReport small = very_ampleness_scan(octagon(), octagon_domain(), fewer);
  CHECK(small.jet_pass_rate <= at_threshold.jet_pass_rate);
  CHECK(small.point_pass_rate <= at_threshold.point_pass_rate);

  // Below the predicted threshold the outcome is recorded, not asserted.
  ScanOptions below = opts;
  below.m = 3;
  const ScanReport m3 = very_ampleness_scan(octagon(), octagon_domain(), below);
  MESSAGE("m=3: jet pass " << m3.jet_pass_rate << ", point pass " << m3.point_pass_rate);

  // Same options, same report.
  const ScanReport again = very_ampleness_scan(octagon(), octagon_domain(), opts);
  CHECK(again.min_jet_ratio == at_threshold.min_jet_ratio);
  CHECK(again.min_point_ratio == at_threshold.min_point_ratio);
}
