#include "poincare/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>

#include "poincare/embedding.hpp"
#include "poincare/error.hpp"
#include "poincare/kernels.hpp"
#include "poincare/parallel.hpp"
#include "poincare/series.hpp"
#include "poincare/seshadri.hpp"

#ifndef POINCARE_VERSION
#define POINCARE_VERSION "unknown"
#endif

namespace poincare::cli {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Formatting

json cplx(Complex z) { return json::array({z.real(), z.imag()}); }

std::string word_text(const Word& w) {
  std::string s;
  for (int k : w) {
    if (!s.empty()) s += ' ';
    s += std::to_string(k);
  }
  return s;
}

/// CSV writer with fixed 17-significant-digit numbers.
class Csv {
 public:
  explicit Csv(std::initializer_list<const char*> header) {
    bool first = true;
    for (const char* h : header) {
      if (!first) text_ += ',';
      text_ += h;
      first = false;
    }
    text_ += '\n';
  }
  Csv& num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return field(buf);
  }
  Csv& num(Complex z) { return num(z.real()).num(z.imag()); }
  Csv& integer(long long v) { return field(std::to_string(v)); }
  Csv& text(const std::string& s) { return field('"' + s + '"'); }
  void end() {
    text_ += '\n';
    row_open_ = false;
  }
  std::string str() const { return text_; }

 private:
  Csv& field(const std::string& s) {
    if (row_open_) text_ += ',';
    text_ += s;
    row_open_ = true;
    return *this;
  }
  std::string text_;
  bool row_open_ = false;
};

// ---------------------------------------------------------------------------
// Shared state built lazily from the config

class Context {
 public:
  explicit Context(const ExperimentConfig& c) : cfg(c), group(c.group()) {}

  const ExperimentConfig& cfg;
  FuchsianGroup group;

  DiscPoint x() const { return DiscPoint(cfg.point("x")); }
  DiscPoint z() const { return DiscPoint(cfg.point("z")); }
  int m() const { return cfg.integer("m"); }
  SeedFunction seed() const { return SeedFunction::parse(cfg.text("seed")); }
  double radius() const { return cfg.real("radius"); }
  std::size_t samples() const { return static_cast<std::size_t>(cfg.integer("samples")); }
  std::uint64_t rng_seed() const { return static_cast<std::uint64_t>(cfg.integer("rng_seed")); }
  PolarGrid grid() const {
    return {static_cast<std::size_t>(cfg.integer("polar_radial")), static_cast<std::size_t>(cfg.integer("polar_angular"))};
  }

  const FundamentalDomain& domain() {
    if (!domain_) {
      DomainOptions opts;
      opts.grid_spacing = cfg.real("domain_spacing");
      domain_ = std::make_unique<FundamentalDomain>(dirichlet_domain(group, x(), opts));
    }
    return *domain_;
  }

  /// Seeded uniform picks among the domain's quadrature nodes.
  std::vector<Complex> domain_points(std::size_t n) {
    const auto& nodes = domain().quadrature.nodes;
    std::mt19937_64 rng(rng_seed());
    std::uniform_int_distribution<std::size_t> pick(0, nodes.size() - 1);
    std::vector<Complex> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(nodes[pick(rng)]);
    return out;
  }

  /// Seeded uniform points of the Euclidean disc of radius r_max.
  std::vector<Complex> disc_points(std::size_t n, double r_max) const {
    std::mt19937_64 rng(rng_seed());
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Complex> out;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = r_max * std::sqrt(u(rng));
      out.push_back(std::polar(r, 2.0 * std::numbers::pi * u(rng)));
    }
    return out;
  }

  /// The r key, defaulting to the injectivity radius at x.
  double cutoff_radius() {
    if (const auto r = cfg.optional_real("r")) return *r;
    return rho_x();
  }

  double rho_x() {
    if (!rho_x_) rho_x_ = injectivity_radius(group, x());
    return *rho_x_;
  }

 private:
  std::unique_ptr<FundamentalDomain> domain_;
  std::optional<double> rho_x_;
};

json series_json(const SeriesValue& v) {
  return {{"value", cplx(v.value)},
          {"tail_estimate", v.tail_estimate},
          {"terms_used", v.terms_used},
          {"radius_used", v.radius_used},
          {"absolute_sum", v.absolute_sum}};
}

json thresholds_json(const Thresholds& t) {
  json j{{"demailly", t.demailly}, {"main", t.main}};
  j["df"] = t.df ? json(*t.df) : json(nullptr);
  return j;
}

// ---------------------------------------------------------------------------
// Commands

CommandResult cmd_enumerate(Context& ctx) {
  const OrbitBall ball = enumerate_ball(ctx.group, ctx.x(), ctx.radius());
  CommandResult out;
  const std::vector<Complex> probes{ctx.x().value(), ctx.z().value()};
  const double fixed = min_fixed_point_distance(ball, probes);
  const double residual = ctx.group.relator_residual();
  out.result = {{"radius", ball.radius},
                {"size", ball.size()},
                {"explored", ball.explored},
                {"max_displacement", ball.elements.back().displacement},
                {"relator_residual", residual},
                {"min_fixed_point_distance", ball.size() > 1 ? json(fixed) : json(nullptr)}};
  out.passed = residual < 1e-8 && (ball.size() == 1 || fixed > 0.0);
  Csv csv{"index", "word", "re", "im", "displacement"};
  const auto pts = ball.orbit_points();
  for (std::size_t i = 0; i < ball.size(); ++i) {
    csv.integer(static_cast<long long>(i)).text(word_text(ball.elements[i].element.word));
    csv.num(pts[i]).num(ball.elements[i].displacement).end();
  }
  out.csv = csv.str();
  return out;
}

CommandResult cmd_fundamental_domain(Context& ctx) {
  const FundamentalDomain& f = ctx.domain();
  // Tiling sample: uniform points of the hyperbolic disc of radius 2 about
  // the center.
  const Mobius from_frame = f.to_frame.inverse();
  std::vector<Complex> pts;
  for (Complex w : ctx.disc_points(ctx.samples(), std::tanh(1.0))) pts.push_back(from_frame.apply(w));
  const TilingReport tiling = tiling_check(ctx.group, f, pts);
  const double weight = f.quadrature.total_weight();
  const double area_defect = std::abs(weight - f.euclidean_area) / f.euclidean_area;
  json vertices = json::array();
  for (Complex v : f.vertices) vertices.push_back(cplx(v));
  CommandResult out;
  out.result = {{"center", cplx(f.center)},
                {"sides", f.sides.size()},
                {"vertices", vertices},
                {"circumradius", f.circumradius},
                {"euclidean_area", f.euclidean_area},
                {"quadrature_nodes", f.quadrature.size()},
                {"quadrature_weight", weight},
                {"area_relative_defect", area_defect},
                {"grid_spacing", f.grid_spacing},
                {"ball_radius", f.ball_radius},
                {"tiling",
                 {{"samples", tiling.samples},
                  {"exactly_one", tiling.exactly_one},
                  {"none", tiling.none},
                  {"multiple", tiling.multiple},
                  {"ball_radius", tiling.ball_radius}}}};
  out.passed = tiling.exactly_one == tiling.samples && area_defect < 1e-3;
  Csv csv{"vertex", "re", "im"};
  for (std::size_t i = 0; i < f.vertices.size(); ++i) csv.integer(static_cast<long long>(i)).num(f.vertices[i]).end();
  out.csv = csv.str();
  return out;
}

CommandResult cmd_weight_sum(Context& ctx) {
  const double r = ctx.radius();
  const Complex z = ctx.z().value();
  const OrbitBall big = enumerate_ball(ctx.group, ctx.x(), r + 2.0);
  OrbitBall small = big;
  small.radius = r;
  std::erase_if(small.elements, [r](const OrbitElement& e) { return e.displacement > r; });
  const SeriesValue a = weight_sum(small, z);
  const SeriesValue b = weight_sum(big, z);
  // Partial sums over unit displacement shells; the terms are positive, so
  // the sums must be monotone.
  Csv csv{"shell_radius", "partial_sum", "terms"};
  double partial = 0.0;
  std::size_t terms = 0;
  bool monotone = true;
  std::size_t k = 0;
  for (double shell = 1.0; shell <= r + 2.0 + 1e-12; shell += 1.0) {
    const double before = partial;
    for (; k < big.elements.size() && big.elements[k].displacement <= shell; ++k, ++terms)
      partial += std::norm(big.elements[k].element.matrix.jacobian(z));
    monotone = monotone && partial >= before;
    csv.num(shell).num(partial).integer(static_cast<long long>(terms)).end();
  }
  const double difference = std::abs(b.value.real() - a.value.real());
  CommandResult out;
  out.result = {{"z", cplx(z)},
                {"at_radius", series_json(a)},
                {"at_radius_plus_2", series_json(b)},
                {"difference", difference},
                {"within_tail", difference <= a.tail_estimate},
                {"partial_sums_monotone", monotone}};
  out.passed = difference <= a.tail_estimate && monotone;
  out.csv = csv.str();
  return out;
}

CommandResult cmd_poincare_eval(Context& ctx) {
  const OrbitBall ball = enumerate_ball(ctx.group, ctx.x(), ctx.radius());
  const SeedFunction f = ctx.seed();
  const Complex z = ctx.z().value();
  CommandResult out;
  out.result = {{"z", cplx(z)},
                {"m", ctx.m()},
                {"seed", f.to_string()},
                {"value", series_json(poincare_eval(ball, f, ctx.m(), z))},
                {"derivative", series_json(poincare_derivative(ball, f, ctx.m(), z))}};
  return out;
}

CommandResult cmd_automorphy_check(Context& ctx) {
  if (ctx.group.generators.empty()) throw Error(Errc::InvalidArgument, "the group has no generators");
  const OrbitBall ball = enumerate_ball(ctx.group, DiscPoint(ctx.domain().center), ctx.radius());
  const auto pts = ctx.domain_points(ctx.samples());
  std::mt19937_64 rng(ctx.rng_seed() + 1);
  std::uniform_int_distribution<std::size_t> pick(0, ctx.group.generators.size() - 1);
  std::vector<GroupElement> gammas;
  for (std::size_t i = 0; i < pts.size(); ++i) gammas.push_back(ctx.group.generators[pick(rng)]);
  const SeedFunction f = ctx.seed();
  const AutomorphyReport rep = automorphy_check(ball, f, ctx.m(), gammas, pts);
  std::size_t ok = 0;
  Csv csv{"word", "z_re", "z_im", "residual", "tail", "rounding_floor", "ok"};
  for (const auto& r : rep.records) {
    ok += r.ok;
    csv.text(word_text(r.gamma)).num(r.z).num(r.residual).num(r.tail).num(r.rounding_floor).integer(r.ok).end();
  }
  CommandResult out;
  out.result = {{"m", rep.m},
                {"seed", rep.seed},
                {"radius", rep.radius},
                {"records", rep.records.size()},
                {"records_ok", ok},
                {"max_residual", rep.max_residual},
                {"max_ratio", rep.max_ratio}};
  out.passed = rep.passed;
  out.csv = csv.str();
  return out;
}

CommandResult cmd_norm(Context& ctx) {
  const SeedFunction f = ctx.seed();
  const NormReport rep = norm_pl(f, ctx.cfg.integer("p"), ctx.cfg.real("l"), ctx.grid());
  CommandResult out;
  out.result = {{"seed", f.to_string()},
                {"p", rep.p},
                {"l", rep.l},
                {"value", rep.value},
                {"coarse", rep.coarse},
                {"error_estimate", rep.error_estimate}};
  return out;
}

CommandResult cmd_unfolded_bound_check(Context& ctx) {
  UnfoldedBoundOptions opts;
  opts.radii = ctx.cfg.reals("radii");
  std::sort(opts.radii.begin(), opts.radii.end());
  opts.grid = ctx.grid();
  opts.spacing = ctx.cfg.real("unfolded_spacing");
  const UnfoldedBoundContext lc = make_unfolded_bound_context(ctx.group, ctx.domain(), opts);
  const SeedFunction f = ctx.seed();
  const UnfoldedBoundReport rep = unfolded_bound_check(lc, f, ctx.m());
  CommandResult out;
  out.result = {{"m", rep.m},
                {"seed", rep.seed},
                {"radii", rep.radii},
                {"lhs", rep.lhs},
                {"unfolded", rep.unfolded},
                {"unfolding_relative", rep.unfolding_relative},
                {"rhs", rep.rhs},
                {"rhs_error", rep.rhs_error},
                {"gap", rep.gap},
                {"slack", opts.slack},
                {"lhs_le_rhs", rep.lhs_le_rhs},
                {"monotone", rep.monotone},
                {"unfolding_ok", rep.unfolding_ok}};
  out.passed = rep.passed;
  Csv csv{"radius", "lhs", "unfolded", "unfolding_relative"};
  for (std::size_t i = 0; i < rep.radii.size(); ++i)
    csv.num(rep.radii[i]).num(rep.lhs[i]).num(rep.unfolded[i]).num(rep.unfolding_relative[i]).end();
  out.csv = csv.str();
  return out;
}

CommandResult cmd_approx_poly(Context& ctx) {
  const SeedFunction f = ctx.seed();
  const double delta = ctx.cfg.real("delta");
  const PolynomialApproximation a =
      polynomial_approx(f, ctx.cfg.real("l"), delta, ctx.cfg.integer("max_degree"), ctx.grid());
  CommandResult out;
  out.result = {{"seed", f.to_string()},
                {"l", ctx.cfg.real("l")},
                {"delta", delta},
                {"t", a.t},
                {"degree", a.degree},
                {"achieved", a.achieved},
                {"dilation_error", a.dilation_error},
                {"polynomial", a.polynomial.to_string()}};
  out.passed = a.achieved < delta;
  Csv csv{"k", "re", "im"};
  const auto& c = a.polynomial.coefficients();
  for (std::size_t k = 0; k < c.size(); ++k) csv.integer(static_cast<long long>(k)).num(c[k]).end();
  out.csv = csv.str();
  return out;
}

CommandResult cmd_kernel_check(Context& ctx) {
  const int m = ctx.m();
  const OrbitBall ball = enumerate_ball(ctx.group, ctx.x(), std::min(ctx.radius(), 6.0));
  std::vector<GroupElement> elements;
  for (const auto& e : ball.elements) elements.push_back(e.element);
  const TransformationReport tr = kernel_transformation_check(elements, m, ctx.samples(), ctx.rng_seed());
  const GramReport gram = kernel_gram(m, ctx.disc_points(ctx.samples(), 0.8));
  const SeedFunction h = ctx.seed();
  const ReproducingReport rp = reproducing_check(m, h, ctx.z().value(), ctx.grid());
  const bool gram_ok = gram.hermitian_defect < 1e-12 && gram.min_eigenvalue >= -1e-10 * gram.max_eigenvalue;
  CommandResult out;
  out.result = {{"m", m},
                {"transformation",
                 {{"samples", tr.samples}, {"elements", elements.size()}, {"max_residual", tr.max_residual},
                  {"passed", tr.passed}}},
                {"gram",
                 {{"points", ctx.samples()},
                  {"hermitian_defect", gram.hermitian_defect},
                  {"min_eigenvalue", gram.min_eigenvalue},
                  {"max_eigenvalue", gram.max_eigenvalue},
                  {"positive_semidefinite", gram_ok}}},
                {"reproducing",
                 {{"seed", h.to_string()},
                  {"w", cplx(ctx.z().value())},
                  {"value", cplx(rp.value)},
                  {"expected", cplx(rp.expected)},
                  {"relative_error", rp.relative_error},
                  {"coarse_relative_error", rp.coarse_relative_error},
                  {"halving_ok", rp.halving_ok}}}};
  out.passed = tr.passed && gram_ok && rp.relative_error < 5e-3 && rp.halving_ok;
  return out;
}

CommandResult cmd_cm_constant(Context& ctx) {
  const std::vector<Complex> probes{0.0, 0.2, std::polar(0.4, std::numbers::pi / 3.0), {-0.5, 0.1},
                                    ctx.z().value()};
  const CmReport rep = cm_constant(ctx.m(), probes, ctx.grid());
  CommandResult out;
  json ps = json::array();
  for (Complex p : rep.probes) ps.push_back(cplx(p));
  out.result = {{"m", rep.m}, {"probes", ps}, {"values", rep.values}, {"analytic", rep.analytic},
                {"spread", rep.spread}};
  out.passed = rep.spread < 0.01;
  Csv csv{"re", "im", "value"};
  for (std::size_t i = 0; i < rep.probes.size(); ++i) csv.num(rep.probes[i]).num(rep.values[i]).end();
  out.csv = csv.str();
  return out;
}

CommandResult cmd_roundtrip(Context& ctx) {
  const double inner_r = ctx.radius();
  const double outer_r = ctx.cfg.real("outer_radius");
  const FundamentalDomain& f = ctx.domain();
  const OrbitBall inner = enumerate_ball(ctx.group, DiscPoint(f.center), inner_r);
  OrbitBall outer;
  if (outer_r <= inner_r) {
    outer = inner;
    outer.radius = outer_r;
    std::erase_if(outer.elements, [outer_r](const OrbitElement& e) { return e.displacement > outer_r; });
  } else {
    outer = enumerate_ball(ctx.group, DiscPoint(f.center), outer_r);
  }
  const Quadrature region = clipped_grid(f, ctx.cfg.real("roundtrip_spacing"), 8);
  const auto pts = ctx.domain_points(ctx.samples());
  const RoundtripReport rep = roundtrip_check(inner, outer, region, ctx.seed(), ctx.m(), pts);
  CommandResult out;
  out.result = {{"m", rep.m},
                {"inner_radius", inner_r},
                {"outer_radius", outer_r},
                {"region_nodes", rep.region_nodes},
                {"points", rep.points.size()},
                {"max_relative_error", rep.max_relative_error}};
  out.passed = rep.max_relative_error < 0.05;
  Csv csv{"z_re", "z_im", "h_re", "h_im", "reconstructed_re", "reconstructed_im", "relative_error"};
  for (const auto& p : rep.points) csv.num(p.z).num(p.h).num(p.reconstructed).num(p.relative_error).end();
  out.csv = csv.str();
  return out;
}

CommandResult cmd_injectivity_radius(Context& ctx) {
  const double rho = ctx.rho_x();
  CommandResult out;
  out.result = {{"x", cplx(ctx.x().value())},
                {"rho_x", rho},
                {"min_displacement", 2.0 * rho},
                {"min_generator_displacement", ctx.group.generators.empty()
                                                   ? json(nullptr)
                                                   : json(ctx.group.min_generator_displacement(ctx.x().value()))}};
  return out;
}

json density_json(const DensityReport& d) {
  return {{"r", d.r},
          {"density", d.density},
          {"max_count", d.max_count},
          {"argmax", cplx(d.argmax)},
          {"coarse_samples", d.coarse_samples},
          {"refined_samples", d.refined_samples},
          {"coarse_max_count", d.coarse_max_count},
          {"spacing", d.spacing}};
}

CommandResult cmd_density(Context& ctx) {
  const double r = ctx.cutoff_radius();
  CommandResult out;
  out.result = density_json(density(ctx.group, ctx.domain(), ctx.x(), r));
  out.result["x"] = cplx(ctx.x().value());
  return out;
}

CommandResult cmd_cutoff_check(Context& ctx) {
  const CutoffValue at0 = cutoff_a(0.0);
  const double rho = ctx.rho_x();
  const double r = ctx.cutoff_radius();
  const Complex z = ctx.z().value();
  const DensityReport d = density(ctx.group, ctx.domain(), ctx.x(), rho);
  const double psi = psi_x(ctx.group, ctx.x(), r, ctx.z());
  double invariance = 0.0;
  for (const auto& g : ctx.group.generators)
    invariance = std::max(invariance, std::abs(psi_x(ctx.group, ctx.x(), r, DiscPoint(g.matrix.apply(z))) - psi));
  const double identity = std::abs(d.density * rho * rho - 1.0);
  CommandResult out;
  out.result = {{"a_at_0", at0.value},
                {"a_prime_at_0", at0.derivative},
                {"r", r},
                {"psi_at_z", psi},
                {"invariance_residual", invariance},
                {"rho_x", rho},
                {"count_at_rho_x", d.max_count},
                {"density_at_rho_x", d.density},
                {"density_identity_residual", identity}};
  out.passed = at0.value == 0.0 && at0.derivative == 0.0 && invariance < 1e-10 && d.max_count == 1 &&
               identity < 1e-10;
  Csv csv{"t", "a", "a_prime", "a_second"};
  for (int i = 0; i <= 200; ++i) {
    const double t = -10.0 + 0.06 * i;
    const CutoffValue a = cutoff_a(t);
    csv.num(t).num(a.value).num(a.derivative).num(cutoff_second(t)).end();
  }
  out.csv = csv.str();
  return out;
}

CommandResult cmd_quasi_psh_check(Context& ctx) {
  const double r = ctx.cutoff_radius();
  const FundamentalDomain& f = ctx.domain();
  const DensityReport d = density(ctx.group, f, ctx.x(), r);
  const CutoffPotential psi(ctx.group, ctx.x(), r, f.circumradius + 0.1);
  const Quadrature grid = clipped_grid(f, ctx.cfg.real("psh_spacing"), 1);
  QuasiPshOptions opts;
  opts.h = ctx.cfg.real("h");
  const QuasiPshReport rep = quasi_psh_check(psi, d.density, grid.nodes, opts);
  CommandResult out;
  out.result = {{"r", rep.r},
                {"density", rep.density},
                {"bound", -2.0 * rep.density},
                {"h", opts.h},
                {"points", rep.points},
                {"checked", rep.checked},
                {"excluded", rep.excluded},
                {"violations", rep.violations},
                {"pointwise_violations", rep.pointwise_violations},
                {"min_ratio", rep.min_ratio},
                {"max_tau_ratio", rep.max_tau_ratio}};
  out.passed = rep.passed;
  Csv csv{"re", "im", "ddbar", "bound", "tau"};
  for (const auto& v : rep.worst) csv.num(v.z).num(v.ddbar).num(v.bound).num(v.tau).end();
  out.csv = csv.str();
  return out;
}

CommandResult cmd_seshadri_bound(Context& ctx) {
  const auto multipliers = ctx.cfg.reals("multipliers");
  const SeshadriReport rep = seshadri_lower_bound(ctx.group, ctx.domain(), ctx.x(), multipliers);
  // The identity D(rho_x, x) = 1 / rho_x^2 makes the two bounds agree at r = rho_x.
  std::optional<double> consistency;
  for (const auto& c : rep.candidates)
    if (c.r == rep.rho_x) consistency = std::abs(rep.bound_inj - c.bound);
  CommandResult out;
  out.result = {{"x_re", rep.x.real()},
                {"x_im", rep.x.imag()},
                {"rho_x", rep.rho_x},
                {"best_r", rep.best_r},
                {"D_best", rep.D_best},
                {"bound_inj", rep.bound_inj},
                {"bound_density", rep.bound_density},
                {"epsilon_lower", rep.epsilon_lower},
                {"consistency_residual", consistency ? json(*consistency) : json(nullptr)}};
  json cands = json::array();
  Csv csv{"r", "density", "count", "bound"};
  for (const auto& c : rep.candidates) {
    cands.push_back({{"r", c.r}, {"density", c.density}, {"count", c.count}, {"bound", c.bound}});
    csv.num(c.r).num(c.density).integer(static_cast<long long>(c.count)).num(c.bound).end();
  }
  out.result["candidates"] = cands;
  out.passed = !consistency || *consistency < 1e-10;
  if (const int n = ctx.cfg.integer("global_samples"); n > 0) {
    const GlobalSeshadri g =
        seshadri_global(ctx.group, ctx.domain(), static_cast<std::size_t>(n), ctx.rng_seed(), multipliers);
    const SeshadriReport& worst = g.reports[g.argmin];
    out.result["global_samples"] = n;
    out.result["global_epsilon_lower"] = g.epsilon_lower;
    out.result["global_argmin_re"] = worst.x.real();
    out.result["global_argmin_im"] = worst.x.imag();
    out.result["global_thresholds"] = thresholds_json(ampleness_thresholds(g.epsilon_lower, 1));
  }
  out.result["thresholds"] = thresholds_json(ampleness_thresholds(rep.epsilon_lower, 1));
  out.csv = csv.str();
  return out;
}

CommandResult cmd_thresholds(Context& ctx) {
  const auto eps = ctx.cfg.optional_real("epsilon");
  if (!eps) throw Error(Errc::ConfigError, "thresholds needs --epsilon");
  const int n = ctx.cfg.integer("n");
  const auto c = ctx.cfg.optional_real("C");
  const Thresholds t = ampleness_thresholds(*eps, n, c);
  CommandResult out;
  out.result = {{"epsilon", *eps}, {"n", n}};
  out.result["C"] = c ? json(*c) : json(nullptr);
  out.result.update(thresholds_json(t));
  // Table of the three criteria for m up to one past the largest threshold.
  const int top = std::max({t.demailly, t.main, t.df.value_or(2)}) + 1;
  json table = json::array();
  Csv csv{"m", "demailly_margin", "main_margin", "df_margin"};
  for (int m = 2; m <= top; ++m) {
    const double dem = (m - 1) * *eps - 2.0 * n;
    const double mn = (m - 2) * *eps - 2.0 * n;
    json row{{"m", m}, {"demailly_margin", dem}, {"main_margin", mn}};
    csv.integer(m).num(dem).num(mn);
    if (c) {
      const double df = (m - 2 + 1.0 / *c) * *eps - 2.0 * n;
      row["df_margin"] = df;
      csv.num(df);
    } else {
      row["df_margin"] = nullptr;
      csv.text("");
    }
    csv.end();
    table.push_back(row);
  }
  out.result["table"] = table;
  out.csv = csv.str();
  return out;
}

CommandResult cmd_separation_scan(Context& ctx) {
  ScanOptions opts;
  opts.m = ctx.m();
  opts.d = ctx.cfg.integer("d");
  opts.radius = ctx.radius();
  opts.samples = ctx.samples();
  opts.seed = ctx.rng_seed();
  opts.epsilon = ctx.cfg.optional_real("epsilon");
  const ScanReport rep = very_ampleness_scan(ctx.group, ctx.domain(), opts);
  CommandResult out;
  out.result = {{"m", opts.m},
                {"d", opts.d},
                {"radius", opts.radius},
                {"samples", opts.samples},
                {"tolerance", opts.tolerance},
                {"jet_pass_rate", rep.jet_pass_rate},
                {"point_pass_rate", rep.point_pass_rate},
                {"min_jet_ratio", rep.min_jet_ratio},
                {"min_point_ratio", rep.min_point_ratio},
                {"max_tail", rep.max_tail}};
  out.result["predicted_m"] = rep.predicted_m ? json(*rep.predicted_m) : json(nullptr);
  out.passed = rep.passed;
  Csv csv{"kind", "x_re", "x_im", "y_re", "y_im", "sigma_max", "sigma_min", "ratio", "passed"};
  for (const auto& j : rep.jets)
    csv.text("jet").num(j.x).text("").text("").num(j.rank.sigma_max).num(j.rank.sigma_min).num(j.rank.ratio)
        .integer(j.rank.passed).end();
  for (const auto& p : rep.pairs)
    csv.text("point").num(p.x).num(p.y).num(p.rank.sigma_max).num(p.rank.sigma_min).num(p.rank.ratio)
        .integer(p.rank.passed).end();
  out.csv = csv.str();
  return out;
}

using Handler = CommandResult (*)(Context&);

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h{
      {"enumerate", cmd_enumerate},
      {"fundamental-domain", cmd_fundamental_domain},
      {"weight-sum", cmd_weight_sum},
      {"poincare-eval", cmd_poincare_eval},
      {"automorphy-check", cmd_automorphy_check},
      {"norm", cmd_norm},
      {"lemma22-check", cmd_unfolded_bound_check},
      {"approx-poly", cmd_approx_poly},
      {"kernel-check", cmd_kernel_check},
      {"cm-constant", cmd_cm_constant},
      {"roundtrip", cmd_roundtrip},
      {"injectivity-radius", cmd_injectivity_radius},
      {"density", cmd_density},
      {"cutoff-check", cmd_cutoff_check},
      {"quasi-psh-check", cmd_quasi_psh_check},
      {"seshadri-bound", cmd_seshadri_bound},
      {"thresholds", cmd_thresholds},
      {"separation-scan", cmd_separation_scan},
  };
  return h;
}

std::string usage_text() {
  std::string s = "usage: pseries <command> [--config FILE] [--<key> VALUE ...]\ncommands:\n";
  for (const auto& c : command_names()) s += "  " + c + "\n";
  s += "keys:\n";
  for (const auto& k : config_keys()) {
    std::string line = std::string("  --") + k.name;
    line.resize(std::max<std::size_t>(line.size() + 1, 22), ' ');
    s += line + k.help;
    if (*k.fallback) s += std::string(" [") + k.fallback + "]";
    s += "\n";
  }
  return s;
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::ConfigError, "cannot write '" + path + "'");
  f << text;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{
      "enumerate",      "fundamental-domain", "weight-sum",         "poincare-eval", "automorphy-check",
      "norm",           "lemma22-check",      "approx-poly",        "kernel-check",  "cm-constant",
      "roundtrip",      "injectivity-radius", "density",            "cutoff-check",  "quasi-psh-check",
      "seshadri-bound", "thresholds",         "separation-scan"};
  return names;
}

CommandResult run_command(const std::string& command, const ExperimentConfig& config) {
  const auto it = handlers().find(command);
  if (it == handlers().end()) throw Error(Errc::ConfigError, "unknown command '" + command + "'");
  Context ctx(config);
  return it->second(ctx);
}

json make_report(const std::string& command, const ExperimentConfig& config, const CommandResult& result) {
  json cfg = json::object();
  for (const auto& [k, v] : config.values()) cfg[k] = v;
  return {{"command", command},
          {"version", POINCARE_VERSION},
          {"group_source", config.group_source()},
          {"config", cfg},
          {"result", result.result},
          {"status", result.passed ? "ok" : "violated"}};
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Poincare series, Bergman kernels and Seshadri bounds on compact disc quotients", "pseries"};
  app.set_help_flag("--help", "print usage");
  bool version = false;
  std::string command;
  std::string config_path;
  app.add_flag("--version", version, "print the version");
  app.add_option("command", command, "command to run");
  app.add_option("--config", config_path, "experiment config file");
  std::map<std::string, std::optional<std::string>> flags;
  for (const auto& k : config_keys()) app.add_option(std::string("--") + k.name, flags[k.name], k.help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << usage_text();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << usage_text();
    return 1;
  }
  if (version) {
    out << "pseries " << POINCARE_VERSION << "\n";
    return 0;
  }
  if (command.empty() || !handlers().contains(command)) {
    err << (command.empty() ? std::string("error: no command given")
                            : "error: unknown command '" + command + "'")
        << "\n"
        << usage_text();
    return 1;
  }

  try {
    ExperimentConfig config;
    if (!config_path.empty()) config.load_file(config_path);
    for (const auto& k : config_keys())
      if (const auto& v = flags[k.name]) config.set(k.name, *v, std::string("--") + k.name);
    if (const int t = config.integer("threads"); t > 0) parallel::set_thread_count(static_cast<unsigned>(t));

    const CommandResult result = run_command(command, config);
    write_text(config.text("output"), make_report(command, config, result).dump(2) + "\n", out);
    if (config.has("csv") && !result.csv.empty()) write_text(config.text("csv"), result.csv, out);
    return result.passed ? 0 : 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace poincare::cli
