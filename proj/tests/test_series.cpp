#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "poincare/series.hpp"
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

const OrbitBall& ball_at(double radius) {
  static const OrbitBall big = enumerate_ball(octagon(), DiscPoint(0.0, 0.0), 12.0);
  static std::vector<std::pair<double, OrbitBall>> cache;
  for (const auto& [r, b] : cache)
    if (r == radius) return b;
  OrbitBall b = big;
  b.radius = radius;
  std::erase_if(b.elements, [&](const OrbitElement& e) { return e.displacement > radius; });
  cache.emplace_back(radius, std::move(b));
  return cache.back().second;
}

std::vector<Complex> points_in_domain(std::size_t n, unsigned seed) {
  const auto& q = octagon_domain().quadrature;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, q.size() - 1);
  std::vector<Complex> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(q.nodes[pick(rng)]);
  return out;
}

}  // namespace

TEST_CASE("seed functions: parsing, formatting, evaluation") {
  const auto p = SeedFunction::parse("poly 1 0 0.5");
  CHECK(p.kind() == SeedFunction::Kind::Polynomial);
  CHECK(p.degree() == 2);
  CHECK(std::abs(p(Complex{0.3, 0.4}) - (1.0 + 0.5 * Complex{0.3, 0.4} * Complex{0.3, 0.4})) < 1e-15);
  CHECK(SeedFunction::parse(p.to_string()).to_string() == p.to_string());
  CHECK(p.sup_norm() == doctest::Approx(1.5).epsilon(1e-12));

  const auto r = SeedFunction::parse("rational 1 / 2 -1");
  CHECK(std::abs(r(0.5) - 1.0 / 1.5) < 1e-15);
  CHECK(SeedFunction::parse("rational 1/2 -1").to_string() == r.to_string());
  CHECK(r.sup_norm() == doctest::Approx(1.0).epsilon(1e-12));  // at z = 1

  // Derivative against a central difference.
  const Complex z{0.2, -0.3};
  const double h = 1e-6;
  for (const auto& f : {p, r, SeedFunction::parse("poly 0 (0,1) 0 -2")}) {
    const Complex fd = (f(z + h) - f(z - h)) / (2.0 * h);
    CHECK(std::abs(f.derivative(z) - fd) < 1e-8);
  }

  const auto sq = r.squared();
  CHECK(std::abs(sq(z) - r(z) * r(z)) < 1e-15);
  const auto diff = r - p;
  CHECK(std::abs(diff(z) - (r(z) - p(z))) < 1e-15);
}

TEST_CASE("seed functions: rejected inputs") {
  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::InvalidArgument;  // sentinel, checked against other codes
  };
  CHECK(code_of([] { SeedFunction::parse("rational 1 / 1.02 -1"); }) == Errc::UnboundedSeed);  // pole at 1.02
  CHECK(code_of([] { SeedFunction::parse("rational 1 / 0 1"); }) == Errc::UnboundedSeed);      // pole at 0
  CHECK(code_of([] { SeedFunction::parse("rational 1 / 0"); }) == Errc::UnboundedSeed);
  CHECK(code_of([] { SeedFunction::parse("poly 1 x"); }) == Errc::ConfigError);
  CHECK(code_of([] { SeedFunction::parse("spline 1 2"); }) == Errc::ConfigError);
  CHECK(code_of([] { SeedFunction::parse("rational 1 2"); }) == Errc::ConfigError);
  CHECK_NOTHROW(SeedFunction::parse("rational 1 / 1.06 -1"));
}

TEST_CASE("weight_sum: trivial group and monotone partial sums") {
  const auto triv = enumerate_ball(FuchsianGroup::trivial(), DiscPoint(0.0, 0.0), 10.0);
  const auto v = weight_sum(triv, Complex{0.3, 0.1});
  CHECK(v.value == Complex{1.0, 0.0});
  CHECK(v.tail_estimate == 0.0);
  CHECK(v.terms_used == 1);

  std::mt19937_64 rng(31);
  for (int i = 0; i < 10; ++i) {
    const Complex z = random_disc_point(rng, 0.6);
    double prev = 0.0;
    for (double r : {4.0, 6.0, 8.0, 10.0}) {
      const auto s = weight_sum(ball_at(r), z);
      CHECK(s.value.real() >= prev);
      CHECK(s.terms_used == ball_at(r).size());
      prev = s.value.real();
    }
  }
}

TEST_CASE("weight_sum: R = 10 and R = 12 agree within the tail; tails shrink") {
  const auto s10 = weight_sum(ball_at(10.0), 0.0);
  const auto s12 = weight_sum(ball_at(12.0), 0.0);
  MESSAGE("S(10) = " << s10.value.real() << " tail " << s10.tail_estimate << ", S(12) = " << s12.value.real());
  CHECK(std::abs(s12.value - s10.value) <= s10.tail_estimate);
  double prev = std::numeric_limits<double>::infinity();
  for (double r : {8.0, 9.0, 10.0, 11.0, 12.0}) {
    const double t = weight_sum(ball_at(r), 0.0).tail_estimate;
    CHECK(t < prev);
    prev = t;
  }
}

TEST_CASE("poincare_eval: trivial group reproduces the seed") {
  const auto triv = enumerate_ball(FuchsianGroup::trivial(), DiscPoint(0.0, 0.0), 5.0);
  const auto f = SeedFunction::parse("poly 1 -2 0.5");
  for (Complex z : {Complex{0.0, 0.0}, Complex{0.4, -0.2}, Complex{-0.9, 0.1}}) {
    const auto v = poincare_eval(triv, f, 3, z);
    CHECK(std::abs(v.value - f(z)) < 1e-15);
    CHECK(v.tail_estimate == 0.0);
  }
  CHECK_THROWS_AS(poincare_eval(triv, f, 1, 0.0), Error);
}

TEST_CASE("poincare_eval: summation-order robustness") {
  // Oracle: the same terms summed in a shuffled order in long double.
  const auto& ball = ball_at(8.0);
  const auto f = SeedFunction::constant(1.0);
  const auto v = poincare_eval(ball, f, 4, 0.0);
  std::vector<std::size_t> order(ball.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(7);
  std::shuffle(order.begin(), order.end(), rng);
  long double re = 0.0L;
  long double im = 0.0L;
  for (std::size_t i : order) {
    const Complex d = ball.elements[i].element.matrix.denominator(0.0);
    const Complex j = 1.0 / (d * d);
    const Complex t = j * j * j * j;
    re += t.real();
    im += t.imag();
  }
  CHECK(std::abs(v.value.real() - static_cast<double>(re)) <= 1e-13 * std::abs(v.value));
  CHECK(std::abs(v.value.imag() - static_cast<double>(im)) <= 1e-13 * std::abs(v.value));
}

TEST_CASE("poincare_derivative matches central differences") {
  const auto& ball = ball_at(8.0);
  const auto pts = points_in_domain(10, 41);
  for (const auto& f : {SeedFunction::constant(1.0), SeedFunction::monomial(2), SeedFunction::parse("rational 1 / 2 -1")})
    for (int m : {3, 4}) {
      for (Complex z : pts) {
        const double h = 1e-5;
        const Complex fd = (poincare_eval(ball, f, m, z + h).value - poincare_eval(ball, f, m, z - h).value) / (2.0 * h);
        const Complex fd_i =
            (poincare_eval(ball, f, m, z + Complex{0.0, h}).value - poincare_eval(ball, f, m, z - Complex{0.0, h}).value) /
            (2.0 * Complex{0.0, h});
        const Complex d = poincare_derivative(ball, f, m, z).value;
        CHECK(std::abs(d - fd) <= 1e-6 * std::max(1.0, std::abs(d)));
        CHECK(std::abs(d - fd_i) <= 1e-6 * std::max(1.0, std::abs(d)));  // holomorphic: same along i
      }
    }
}

TEST_CASE("automorphy of the truncated series at R = 10") {
  const auto& ball = ball_at(10.0);
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::size_t> pick(0, 7);
  const auto pts = points_in_domain(20, 43);
  std::vector<GroupElement> gammas;
  for (int i = 0; i < 20; ++i) gammas.push_back(octagon().generators[pick(rng)]);
  for (int m : {3, 4, 6})
    for (int k : {0, 1, 2}) {
      const auto rep = automorphy_check(ball, SeedFunction::monomial(k), m, gammas, pts);
      INFO("m = " << m << ", seed z^" << k << ", max residual " << rep.max_residual);
      CHECK(rep.passed);
      CHECK(rep.records.size() == 20);
    }
}

TEST_CASE("automorphy: inverse generators behave like generators") {
  const auto& ball = ball_at(10.0);
  const auto pts = points_in_domain(8, 44);
  std::vector<GroupElement> gammas;
  for (std::size_t k = 0; k < 8; ++k) gammas.push_back(octagon().generators[k].inverse());
  CHECK(automorphy_check(ball, SeedFunction::monomial(1), 4, gammas, pts).passed);
}

TEST_CASE("norm_pl: closed forms and homogeneity") {
  const auto one = SeedFunction::constant(1.0);
  const auto area = norm_pl(one, 1, 0.0);
  CHECK(area.value == doctest::Approx(std::numbers::pi).epsilon(1e-3));
  CHECK(std::abs(area.value - std::numbers::pi) <= 4.0 * area.error_estimate);
  // pi^2 * int_0^1 (1 - s)^2 ds = pi^2 / 3.
  const auto l1 = norm_pl(one, 1, 1.0);
  CHECK(l1.value == doctest::Approx(std::numbers::pi * std::numbers::pi / 3.0).epsilon(1e-4));
  // int |z|^2 = pi / 2.
  CHECK(norm_pl(SeedFunction::monomial(1), 2, 0.0).value == doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-4));
  const auto f = SeedFunction::parse("rational 1 / 2 -1");
  const auto cf = SeedFunction::parse("rational -3 / 2 -1");
  CHECK(norm_pl(cf, 1, 0.5).value == doctest::Approx(3.0 * norm_pl(f, 1, 0.5).value).epsilon(1e-13));
  // Grid halving changes the value by < 0.5%.
  CHECK(std::abs(l1.value - l1.coarse) < 5e-3 * l1.value);
  CHECK_THROWS_AS(norm_pl(one, 3, 0.0), Error);
}

TEST_CASE("integrate_with_estimate flags a divergent integral") {
  const auto grow = [](Complex z) { return std::pow(one_minus_norm(z), -1.5); };
  try {
    (void)integrate_with_estimate(PolarGrid{}, grow);
    FAIL("expected QuadratureDiverged");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::QuadratureDiverged);
  }
}

TEST_CASE("unfolded L1 bound: LHS <= RHS, monotone in R, unfolding agrees") {
  const auto ctx = make_unfolded_bound_context(octagon(), octagon_domain());
  for (const auto& [k, m] : {std::pair{0, 3}, std::pair{2, 6}}) {
    const auto rep = unfolded_bound_check(ctx, SeedFunction::monomial(k), m);
    INFO("seed z^" << k << ", m = " << m << ", LHS " << rep.lhs.back() << ", RHS " << rep.rhs);
    CHECK(rep.monotone);
    CHECK(rep.lhs_le_rhs);
    CHECK(rep.unfolding_ok);
    for (double rel : rep.unfolding_relative) CHECK(rel < 0.01);
    // The unfolded integral over the whole disc is the norm itself, so the
    // gap closes as R grows.
    CHECK(rep.gap < rep.rhs - rep.lhs.front());
  }
}

TEST_CASE("polynomial_approx") {
  const auto poly = SeedFunction::parse("poly 1 2 3");
  const auto same = polynomial_approx(poly, 1.0, 1e-3);
  CHECK(same.polynomial.to_string() == poly.to_string());
  CHECK(same.achieved == 0.0);

  const auto f = SeedFunction::parse("rational 1 / 2 -1");
  const auto approx = polynomial_approx(f, 1.0, 1e-3);
  MESSAGE("t = " << approx.t << ", N = " << approx.degree << ", achieved " << approx.achieved);
  CHECK(approx.t < 1.0);
  const double oracle = norm_pl(f - approx.polynomial, 1, 1.0).value;
  CHECK(oracle < 1e-3);
  CHECK(oracle == doctest::Approx(approx.achieved).epsilon(1e-12));

  // Downstream: |P_m(f) - P_m(h)| <= sup|f - h| * sum |j|^2 on F.
  const auto& ball = ball_at(8.0);
  const double sup = (f - approx.polynomial).sup_norm();
  for (Complex z : points_in_domain(10, 45)) {
    const double diff = std::abs(poincare_eval(ball, f, 4, z).value - poincare_eval(ball, approx.polynomial, 4, z).value);
    CHECK(diff <= sup * weight_sum(ball, z).value.real() * (1.0 + 1e-12));
  }

  try {
    (void)polynomial_approx(f, 1.0, 1e-9, 3);
    FAIL("expected TargetNotReached");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::TargetNotReached);
  }
}

TEST_CASE("Schwarz bound") {
  const auto triv = enumerate_ball(FuchsianGroup::trivial(), DiscPoint(0.0, 0.0), 5.0);
  const auto f = SeedFunction::parse("poly 1 0.5");
  const auto eq = schwarz_bound_check(triv, f, 3, Complex{0.2, 0.3});
  CHECK(eq.lhs == doctest::Approx(eq.rhs).epsilon(1e-14));

  std::mt19937_64 rng(51);
  for (int i = 0; i < 20; ++i) {
    const Complex z = random_disc_point(rng, 0.7);
    const auto rep = schwarz_bound_check(ball_at(8.0), SeedFunction::constant(1.0), 3, z);
    CHECK(rep.passed);
    CHECK(rep.prefixes_checked == ball_at(8.0).size());
    CHECK(rep.lhs <= rep.rhs);
  }
}
