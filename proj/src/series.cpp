#include "poincare/series.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "poincare/parallel.hpp"
#include "poincare/summation.hpp"

namespace poincare {

namespace {

constexpr std::size_t kCircleSamples = 4096;

Complex horner(const std::vector<Complex>& c, Complex z) {
  Complex acc{0.0, 0.0};
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Complex horner_derivative(const std::vector<Complex>& c, Complex z) {
  Complex acc{0.0, 0.0};
  for (std::size_t k = c.size(); k-- > 1;) acc = acc * z + static_cast<double>(k) * c[k];
  return acc;
}

std::vector<Complex> trim_leading_zeros(std::vector<Complex> c) {
  while (c.size() > 1 && c.back() == Complex{0.0, 0.0}) c.pop_back();
  if (c.empty()) c.push_back({0.0, 0.0});
  return c;
}

std::vector<Complex> multiply(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  std::vector<Complex> out(a.size() + b.size() - 1, Complex{0.0, 0.0});
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

/// Zeros of p inside |z| < radius, by the argument principle.
int zeros_inside(const std::vector<Complex>& p, double radius, double& min_modulus) {
  double winding = 0.0;
  min_modulus = std::numeric_limits<double>::infinity();
  Complex prev = horner(p, radius);
  for (std::size_t k = 1; k <= kCircleSamples; ++k) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / kCircleSamples;
    const Complex cur = horner(p, std::polar(radius, theta));
    min_modulus = std::min(min_modulus, std::abs(cur));
    winding += std::arg(cur / prev);
    prev = cur;
  }
  return static_cast<int>(std::lround(winding / (2.0 * std::numbers::pi)));
}

Complex ipow(Complex z, int m) {
  Complex r{1.0, 0.0};
  Complex b = z;
  for (unsigned e = static_cast<unsigned>(m); e; e >>= 1) {
    if (e & 1u) r *= b;
    b *= b;
  }
  return r;
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string format_coefficient(Complex c) {
  if (c.imag() == 0.0) return format_number(c.real());
  return "(" + format_number(c.real()) + "," + format_number(c.imag()) + ")";
}

double parse_real(const std::string& tok, const std::string& spec) {
  double v = 0.0;
  const char* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v))
    throw Error(Errc::ConfigError, "bad coefficient '" + tok + "' in seed '" + spec + "'");
  return v;
}

Complex parse_coefficient(const std::string& tok, const std::string& spec) {
  if (tok.size() > 2 && tok.front() == '(' && tok.back() == ')') {
    const auto comma = tok.find(',');
    if (comma == std::string::npos) throw Error(Errc::ConfigError, "bad complex coefficient '" + tok + "'");
    return {parse_real(tok.substr(1, comma - 1), spec), parse_real(tok.substr(comma + 1, tok.size() - comma - 2), spec)};
  }
  return {parse_real(tok, spec), 0.0};
}

void check_order(int m) {
  if (m < 2) throw Error(Errc::InvalidArgument, "weight m must be >= 2, got " + std::to_string(m));
}

}  // namespace

// ---------------------------------------------------------------------------
// SeedFunction

SeedFunction SeedFunction::polynomial(std::vector<Complex> coefficients) {
  SeedFunction f;
  f.kind_ = Kind::Polynomial;
  f.num_ = trim_leading_zeros(std::move(coefficients));
  if (f.degree() > kMaxSeedDegree)
    throw Error(Errc::InvalidArgument, "polynomial degree " + std::to_string(f.degree()) + " exceeds the cap " +
                                           std::to_string(kMaxSeedDegree));
  f.finish();
  return f;
}

SeedFunction SeedFunction::monomial(int k) {
  if (k < 0) throw Error(Errc::InvalidArgument, "negative monomial degree");
  std::vector<Complex> c(static_cast<std::size_t>(k) + 1, Complex{0.0, 0.0});
  c.back() = 1.0;
  return polynomial(std::move(c));
}

SeedFunction SeedFunction::rational(std::vector<Complex> numerator, std::vector<Complex> denominator) {
  SeedFunction f;
  f.kind_ = Kind::Rational;
  f.num_ = trim_leading_zeros(std::move(numerator));
  f.den_ = trim_leading_zeros(std::move(denominator));
  if (f.den_.size() == 1 && f.den_[0] == Complex{0.0, 0.0}) throw Error(Errc::UnboundedSeed, "zero denominator");
  if (f.den_.size() > 1) {
    double min_mod = 0.0;
    const int inside = zeros_inside(f.den_, kMinPoleModulus, min_mod);
    const double scale = std::abs(horner(f.den_, 0.0)) + std::abs(f.den_.back());
    if (inside != 0 || min_mod < 1e-12 * scale)
      throw Error(Errc::UnboundedSeed, "denominator has a zero of modulus below " + format_number(kMinPoleModulus));
  }
  f.finish();
  return f;
}

SeedFunction SeedFunction::callable(std::function<Complex(Complex)> fn, std::function<Complex(Complex)> dfn,
                                    std::string label) {
  SeedFunction f;
  f.kind_ = Kind::Callable;
  f.fn_ = std::move(fn);
  f.dfn_ = std::move(dfn);
  f.label_ = std::move(label);
  f.finish();
  return f;
}

SeedFunction SeedFunction::parse(const std::string& spec) {
  std::istringstream in(spec);
  std::string kind;
  in >> kind;
  std::vector<Complex> num;
  std::vector<Complex> den;
  bool after_slash = false;
  for (std::string tok; in >> tok;) {
    // Allow "1/2" glued as well as "1 / 2".
    std::size_t pos = 0;
    while (pos <= tok.size()) {
      const auto slash = tok.find('/', pos);
      const std::string piece = tok.substr(pos, slash == std::string::npos ? std::string::npos : slash - pos);
      if (!piece.empty()) (after_slash ? den : num).push_back(parse_coefficient(piece, spec));
      if (slash == std::string::npos) break;
      if (after_slash) throw Error(Errc::ConfigError, "more than one '/' in seed '" + spec + "'");
      after_slash = true;
      pos = slash + 1;
    }
  }
  if (kind == "poly") {
    if (after_slash) throw Error(Errc::ConfigError, "'/' in polynomial seed '" + spec + "'");
    if (num.empty()) throw Error(Errc::ConfigError, "polynomial seed without coefficients");
    return polynomial(std::move(num));
  }
  if (kind == "rational") {
    if (!after_slash || num.empty() || den.empty())
      throw Error(Errc::ConfigError, "rational seed must read 'rational <num> / <den>'");
    return rational(std::move(num), std::move(den));
  }
  throw Error(Errc::ConfigError, "unknown seed kind '" + kind + "' (expected poly or rational)");
}

std::string SeedFunction::to_string() const {
  std::string s;
  switch (kind_) {
    case Kind::Polynomial:
      s = "poly";
      for (Complex c : num_) s += " " + format_coefficient(c);
      return s;
    case Kind::Rational:
      s = "rational";
      for (Complex c : num_) s += " " + format_coefficient(c);
      s += " /";
      for (Complex c : den_) s += " " + format_coefficient(c);
      return s;
    case Kind::Callable:
      return label_;
  }
  return s;
}

Complex SeedFunction::operator()(Complex z) const {
  switch (kind_) {
    case Kind::Polynomial:
      return horner(num_, z);
    case Kind::Rational:
      return horner(num_, z) / horner(den_, z);
    case Kind::Callable:
      return fn_(z);
  }
  return {};
}

Complex SeedFunction::derivative(Complex z) const {
  switch (kind_) {
    case Kind::Polynomial:
      return horner_derivative(num_, z);
    case Kind::Rational: {
      const Complex q = horner(den_, z);
      return (horner_derivative(num_, z) * q - horner(num_, z) * horner_derivative(den_, z)) / (q * q);
    }
    case Kind::Callable:
      return dfn_(z);
  }
  return {};
}

void SeedFunction::finish() {
  sup_ = 0.0;
  for (std::size_t k = 0; k < kCircleSamples; ++k)
    sup_ = std::max(sup_, std::abs((*this)(std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) /
                                                                 kCircleSamples))));
}

SeedFunction SeedFunction::operator-(const SeedFunction& other) const {
  if (kind_ == Kind::Polynomial && other.kind_ == Kind::Polynomial) {
    std::vector<Complex> c(std::max(num_.size(), other.num_.size()), Complex{0.0, 0.0});
    for (std::size_t k = 0; k < num_.size(); ++k) c[k] += num_[k];
    for (std::size_t k = 0; k < other.num_.size(); ++k) c[k] -= other.num_[k];
    return polynomial(std::move(c));
  }
  const SeedFunction a = *this;
  const SeedFunction b = other;
  return callable([a, b](Complex z) { return a(z) - b(z); },
                  [a, b](Complex z) { return a.derivative(z) - b.derivative(z); },
                  "(" + a.to_string() + ") - (" + b.to_string() + ")");
}

SeedFunction SeedFunction::squared() const {
  switch (kind_) {
    case Kind::Polynomial:
      return polynomial(multiply(num_, num_));
    case Kind::Rational:
      return rational(multiply(num_, num_), multiply(den_, den_));
    case Kind::Callable:
      break;
  }
  const SeedFunction a = *this;
  return callable([a](Complex z) { return a(z) * a(z); }, [a](Complex z) { return 2.0 * a(z) * a.derivative(z); },
                  "(" + label_ + ")^2");
}

// ---------------------------------------------------------------------------
// Series evaluation

double shell_tail(const OrbitBall& ball, std::span<const double> magnitudes) {
  const double r = ball.radius;
  CompensatedSum last;
  CompensatedSum prev;
  for (std::size_t i = 0; i < ball.size(); ++i) {
    const double d = ball.elements[i].displacement;
    if (d > r - kShellWidth)
      last += magnitudes[i];
    else if (d > r - 2.0 * kShellWidth)
      prev += magnitudes[i];
  }
  const double s_last = last.value();
  const double s_prev = prev.value();
  if (s_last == 0.0) return s_prev == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  if (s_prev == 0.0) return std::numeric_limits<double>::infinity();
  const double q = s_last / s_prev;
  if (q >= 1.0) return std::numeric_limits<double>::infinity();
  return s_last * q / (1.0 - q);
}

namespace {

/// A finite group has no tail at all once the ball has exhausted it.
bool exhausted(const OrbitBall& ball) { return ball.size() == ball.explored && ball.radius > 0.0; }

}  // namespace

SeriesValue weight_sum(const OrbitBall& ball, Complex z) {
  std::vector<double> mags(ball.size());
  CompensatedSum s;
  for (std::size_t i = 0; i < ball.size(); ++i) {
    const Complex d = ball.elements[i].element.matrix.denominator(z);
    const double a = 1.0 / std::norm(d);  // |j| = 1 / |d|^2
    mags[i] = a * a;
    s += mags[i];
  }
  SeriesValue v;
  v.value = s.value();
  v.absolute_sum = s.value();
  v.terms_used = ball.size();
  v.radius_used = ball.radius;
  v.tail_estimate = exhausted(ball) ? 0.0 : shell_tail(ball, mags);
  return v;
}

SeriesValue weight_sum(const FuchsianGroup& group, DiscPoint x, DiscPoint z, double radius) {
  return weight_sum(enumerate_ball(group, x, radius), z.value());
}

SeriesValue poincare_eval(const OrbitBall& ball, const SeedFunction& f, int m, Complex z) {
  check_order(m);
  if (!DiscPoint::admissible(z)) throw Error(Errc::BoundaryPoint, "evaluation point on the boundary");
  std::vector<double> mags(ball.size());
  CompensatedComplexSum s;
  CompensatedSum abs_sum;
  for (std::size_t i = 0; i < ball.size(); ++i) {
    const Mobius& g = ball.elements[i].element.matrix;
    const Complex d = g.denominator(z);
    const Complex jm = ipow(1.0 / (d * d), m);
    const Complex term = f(g.apply(z)) * jm;
    s += term;
    abs_sum += std::abs(term);
    mags[i] = std::abs(jm);
  }
  SeriesValue v;
  v.value = s.value();
  v.absolute_sum = abs_sum.value();
  v.terms_used = ball.size();
  v.radius_used = ball.radius;
  v.tail_estimate = exhausted(ball) ? 0.0 : f.sup_norm() * shell_tail(ball, mags);
  return v;
}

SeriesValue poincare_eval(const FuchsianGroup& group, const SeedFunction& f, int m, DiscPoint z, double radius) {
  return poincare_eval(enumerate_ball(group, z, radius), f, m, z.value());
}

SeriesValue poincare_derivative(const OrbitBall& ball, const SeedFunction& f, int m, Complex z) {
  check_order(m);
  if (!DiscPoint::admissible(z)) throw Error(Errc::BoundaryPoint, "evaluation point on the boundary");
  // Bounds for the tail: sup |f'| on the circle by the maximum principle.
  double sup_df = 0.0;
  for (std::size_t k = 0; k < 1024; ++k)
    sup_df = std::max(sup_df, std::abs(f.derivative(std::polar(1.0, 2.0 * std::numbers::pi * k / 1024.0))));
  std::vector<double> mags(ball.size());
  CompensatedComplexSum s;
  CompensatedSum abs_sum;
  for (std::size_t i = 0; i < ball.size(); ++i) {
    const Mobius& g = ball.elements[i].element.matrix;
    const Complex d = g.denominator(z);
    const Complex j = 1.0 / (d * d);
    const Complex jm = ipow(j, m);
    const Complex gz = g.apply(z);
    const Complex log_dj = -2.0 * std::conj(g.beta) / d;  // j'/j
    const Complex term = f.derivative(gz) * jm * j + static_cast<double>(m) * f(gz) * jm * log_dj;
    s += term;
    abs_sum += std::abs(term);
    mags[i] = sup_df * std::abs(jm * j) + static_cast<double>(m) * f.sup_norm() * std::abs(jm * log_dj);
  }
  SeriesValue v;
  v.value = s.value();
  v.absolute_sum = abs_sum.value();
  v.terms_used = ball.size();
  v.radius_used = ball.radius;
  v.tail_estimate = exhausted(ball) ? 0.0 : shell_tail(ball, mags);
  return v;
}

AutomorphyReport automorphy_check(const OrbitBall& ball, const SeedFunction& f, int m,
                                  std::span<const GroupElement> gammas, std::span<const Complex> points) {
  if (gammas.size() != points.size()) throw Error(Errc::InvalidArgument, "one point per group element expected");
  AutomorphyReport rep;
  rep.m = m;
  rep.seed = f.to_string();
  rep.radius = ball.radius;
  rep.records.resize(gammas.size());
  parallel::for_each_index(gammas.size(), [&](std::size_t i) {
    const Mobius& g = gammas[i].matrix;
    const Complex z = points[i];
    const SeriesValue at_z = poincare_eval(ball, f, m, z);
    const SeriesValue at_gz = poincare_eval(ball, f, m, g.apply(z));
    const Complex jm = ipow(g.jacobian(z), m);
    AutomorphyRecord& r = rep.records[i];
    r.gamma = gammas[i].word;
    r.z = z;
    r.residual = std::abs(at_gz.value * jm - at_z.value);
    r.tail = std::max(at_z.tail_estimate, std::abs(jm) * at_gz.tail_estimate);
    // Rounding floor for exhausted (finite) groups where the tail is zero.
    r.rounding_floor = 1e-13 * (at_z.absolute_sum + std::abs(jm) * at_gz.absolute_sum);
    r.ok = r.residual <= 2.0 * r.tail + r.rounding_floor;
  });
  rep.passed = true;
  for (const auto& r : rep.records) {
    rep.max_residual = std::max(rep.max_residual, r.residual);
    const double bound = 2.0 * r.tail + r.rounding_floor;
    if (bound > 0.0) rep.max_ratio = std::max(rep.max_ratio, r.residual / bound);
    rep.passed = rep.passed && r.ok;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Norms and the unfolded L1 bound

namespace {

/// K(z, z)^{-l} = (pi (1 - |z|^2)^2)^l.
double kernel_power(Complex z, double l) {
  if (l == 0.0) return 1.0;
  const double d = one_minus_norm(z);
  return std::pow(std::numbers::pi * d * d, l);
}

}  // namespace

NormReport norm_pl(const SeedFunction& f, int p, double l, const PolarGrid& grid) {
  if (p != 1 && p != 2) throw Error(Errc::InvalidArgument, "norm exponent p must be 1 or 2");
  if (!(l >= 0.0)) throw Error(Errc::InvalidArgument, "norm weight l must be >= 0");
  auto integrand = [&](Complex z) {
    const double a = std::abs(f(z));
    return (p == 1 ? a : a * a) * kernel_power(z, l);
  };
  const auto est = integrate_with_estimate(grid, integrand);
  return {est.value, est.coarse, est.error, p, l};
}

std::vector<double> tile_displacements(const FundamentalDomain& domain, const PolarGrid& grid, double radius) {
  std::vector<double> out(grid.size(), std::numeric_limits<double>::infinity());
  const double reach = radius + domain.circumradius + 1e-9;
  const Complex x = domain.center;
  parallel::for_each_index(grid.size(), [&](std::size_t k) {
    const Complex w = grid.node(k / grid.angular, k % grid.angular);
    if (hyperbolic_distance(x, w) > reach) return;
    const Reduction red = reduce_to_domain(domain, w);
    out[k] = hyperbolic_distance(x, red.element.matrix.apply(x));
  });
  return out;
}

UnfoldedBoundContext make_unfolded_bound_context(const FuchsianGroup& group, const FundamentalDomain& domain,
                                    const UnfoldedBoundOptions& options) {
  if (options.radii.empty() || !std::is_sorted(options.radii.begin(), options.radii.end()))
    throw Error(Errc::InvalidArgument, "unfolded-bound radii must be nonempty and ascending");
  UnfoldedBoundContext ctx;
  ctx.domain = &domain;
  ctx.options = options;
  ctx.ball = enumerate_ball(group, DiscPoint(domain.center), options.radii.back());
  ctx.f_grid = clipped_grid(domain, options.spacing, 8);
  ctx.tiles = tile_displacements(domain, options.grid, options.radii.back());
  return ctx;
}

UnfoldedBoundReport unfolded_bound_check(const UnfoldedBoundContext& ctx, const SeedFunction& f, int m) {
  check_order(m);
  const auto& radii = ctx.options.radii;
  const std::size_t nr = radii.size();
  const double l = (m - 2) / 2.0;
  UnfoldedBoundReport rep;
  rep.m = m;
  rep.seed = f.to_string();
  rep.radii = radii;

  // Left-hand side: per node, prefix sums of the absolute series at each radius.
  const Quadrature& q = ctx.f_grid;
  std::vector<double> per_node(q.size() * nr, 0.0);
  parallel::for_each_index(q.size(), [&](std::size_t i) {
    const Complex z = q.nodes[i];
    CompensatedSum s;
    std::size_t k = 0;
    for (const auto& e : ctx.ball.elements) {
      while (k < nr && e.displacement > radii[k]) per_node[i * nr + k++] = s.value();
      if (k == nr) break;
      const Complex d = e.element.matrix.denominator(z);
      const double abs_j = 1.0 / std::norm(d);
      s += std::abs(f(e.element.matrix.apply(z))) * std::pow(abs_j, m);
    }
    while (k < nr) per_node[i * nr + k++] = s.value();
    const double w = kernel_power(z, l) * q.weights[i];
    for (std::size_t r = 0; r < nr; ++r) per_node[i * nr + r] *= w;
  });
  rep.lhs.assign(nr, 0.0);
  for (std::size_t r = 0; r < nr; ++r) {
    CompensatedSum s;
    for (std::size_t i = 0; i < q.size(); ++i) s += per_node[i * nr + r];
    rep.lhs[r] = s.value();
  }

  const NormReport rhs = norm_pl(f, 1, l, ctx.options.grid);
  rep.rhs = rhs.value;
  rep.rhs_error = rhs.error_estimate;

  // Unfolded side: |f| K^{(2-m)/2} over the tiles gamma F with gamma in the ball.
  const PolarGrid& g = ctx.options.grid;
  std::vector<double> rings(g.radial * nr, 0.0);
  parallel::for_each_index(g.radial, [&](std::size_t i) {
    std::vector<CompensatedSum> s(nr);
    for (std::size_t j = 0; j < g.angular; ++j) {
      const double t = ctx.tiles[i * g.angular + j];
      if (!std::isfinite(t)) continue;
      const Complex w = g.node(i, j);
      const double v = std::abs(f(w)) * kernel_power(w, l);
      for (std::size_t r = 0; r < nr; ++r)
        if (t <= radii[r]) s[r] += v;
    }
    for (std::size_t r = 0; r < nr; ++r)
      rings[i * nr + r] = s[r].value() * g.radial_weight(i) * g.angular_weight();
  });
  rep.unfolded.assign(nr, 0.0);
  rep.unfolding_relative.assign(nr, 0.0);
  rep.unfolding_ok = true;
  for (std::size_t r = 0; r < nr; ++r) {
    CompensatedSum s;
    for (std::size_t i = 0; i < g.radial; ++i) s += rings[i * nr + r];
    rep.unfolded[r] = s.value();
    rep.unfolding_relative[r] = std::abs(rep.unfolded[r] - rep.lhs[r]) / std::max(rep.lhs[r], 1e-300);
    rep.unfolding_ok = rep.unfolding_ok && rep.unfolding_relative[r] <= ctx.options.unfolding_tolerance;
  }

  rep.monotone = std::is_sorted(rep.lhs.begin(), rep.lhs.end());
  rep.lhs_le_rhs = rep.lhs.back() <= rep.rhs * (1.0 + ctx.options.slack);
  rep.gap = rep.rhs - rep.lhs.back();
  rep.passed = rep.monotone && rep.lhs_le_rhs && rep.unfolding_ok;
  return rep;
}

// ---------------------------------------------------------------------------
// Polynomial approximation

PolynomialApproximation polynomial_approx(const SeedFunction& f, double l, double delta, int max_degree,
                                          const PolarGrid& grid) {
  if (!(delta > 0.0)) throw Error(Errc::InvalidArgument, "target delta must be positive");
  PolynomialApproximation out;
  if (f.kind() == SeedFunction::Kind::Polynomial && f.degree() <= max_degree) {
    out.polynomial = f;
    out.degree = f.degree();
    return out;
  }

  // Taylor coefficients by the discrete Cauchy integral on |z| = 1, valid
  // since f is holomorphic past the closed disc (aliasing decays like the
  // pole modulus to the power -kSamples).
  constexpr std::size_t kSamples = 4096;
  const std::size_t ncoef = static_cast<std::size_t>(max_degree) + 1;
  if (ncoef > kSamples / 2) throw Error(Errc::InvalidArgument, "max degree too large for the Cauchy sampling");
  std::vector<Complex> values(kSamples);
  for (std::size_t j = 0; j < kSamples; ++j)
    values[j] = f(std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) / kSamples));
  std::vector<Complex> taylor(ncoef);
  for (std::size_t k = 0; k < ncoef; ++k) {
    CompensatedComplexSum s;
    for (std::size_t j = 0; j < kSamples; ++j)
      s += values[j] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k * j % kSamples) / kSamples);
    taylor[k] = s.value() / static_cast<double>(kSamples);
  }

  auto distance_to = [&](const SeedFunction& g) { return norm_pl(f - g, 1, l, grid).value; };

  // Dilation first.
  double t = 1.0;
  bool found = false;
  for (int k = 1; k <= 40 && !found; ++k) {
    t = 1.0 - std::ldexp(1.0, -k);
    const double tt = t;
    const SeedFunction ft = SeedFunction::callable([f, tt](Complex z) { return f(tt * z); },
                                                   [f, tt](Complex z) { return tt * f.derivative(tt * z); }, "f^t");
    out.dilation_error = distance_to(ft);
    found = out.dilation_error < delta / 2.0;
  }
  if (!found) throw Error(Errc::TargetNotReached, "no dilation t < 1 brings ||f - f^t|| below delta / 2");
  out.t = t;

  auto truncation = [&](int n) {
    std::vector<Complex> c(static_cast<std::size_t>(n) + 1);
    double tk = 1.0;
    for (int k = 0; k <= n; ++k, tk *= t) c[static_cast<std::size_t>(k)] = taylor[static_cast<std::size_t>(k)] * tk;
    return SeedFunction::polynomial(std::move(c));
  };

  int hi = 1;
  double err = distance_to(truncation(hi));
  while (err >= delta) {
    if (hi == max_degree)
      throw Error(Errc::TargetNotReached, "degree cap " + std::to_string(max_degree) + " reached with ||f - h|| = " +
                                              format_number(err));
    hi = std::min(2 * hi, max_degree);
    err = distance_to(truncation(hi));
  }
  int lo = hi / 2;  // known (or assumed, for hi = 1) to miss the target
  double best = err;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    const double e = distance_to(truncation(mid));
    if (e < delta) {
      hi = mid;
      best = e;
    } else {
      lo = mid;
    }
  }
  out.polynomial = truncation(hi);
  out.degree = hi;
  out.achieved = best;
  return out;
}

// ---------------------------------------------------------------------------
// Schwarz bound

SchwarzReport schwarz_bound_check(const OrbitBall& ball, const SeedFunction& f, int m, Complex z) {
  check_order(m);
  SchwarzReport rep;
  CompensatedSum a;
  CompensatedSum b;
  CompensatedSum c;
  for (const auto& e : ball.elements) {
    const Complex d = e.element.matrix.denominator(z);
    const double abs_j = 1.0 / std::norm(d);
    const double abs_f = std::abs(f(e.element.matrix.apply(z)));
    a += abs_f * std::pow(abs_j, m);
    b += abs_f * abs_f * std::pow(abs_j, 2 * m - 2);
    c += abs_j * abs_j;
    const double lhs = a.value() * a.value();
    const double rhs = b.value() * c.value();
    ++rep.prefixes_checked;
    if (lhs > rhs * (1.0 + 1e-12)) ++rep.prefix_violations;
  }
  rep.lhs = a.value() * a.value();
  rep.rhs = b.value() * c.value();
  rep.weight_sum = c.value();
  rep.passed = rep.prefix_violations == 0;
  return rep;
}

}  // namespace poincare
