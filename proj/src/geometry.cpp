#include "poincare/geometry.hpp"

#include <algorithm>
#include <sstream>

namespace poincare {
namespace {

void require_unitary(const Mobius& m) {
  if (m.unitarity_defect() > kUnitaryTolerance) {
    std::ostringstream os;
    os << "| |alpha|^2 - |beta|^2 - 1 | = " << m.unitarity_defect();
    throw Error(Errc::NonUnitary, os.str());
  }
}

}  // namespace

DiscPoint::DiscPoint(Complex z) : z_(z) {
  if (!admissible(z) || !std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    std::ostringstream os;
    os << "|z| = " << std::abs(z) << " is not inside the boundary guard";
    throw Error(Errc::BoundaryPoint, os.str());
  }
}

Mobius Mobius::operator*(const Mobius& rhs) const noexcept {
  Mobius out{alpha * rhs.alpha + beta * std::conj(rhs.beta), alpha * rhs.beta + beta * std::conj(rhs.alpha)};
  out.normalize();
  return out;
}

void Mobius::normalize() noexcept {
  const double det = std::norm(alpha) - std::norm(beta);
  if (det > 0.0) {
    const double s = 1.0 / std::sqrt(det);
    alpha *= s;
    beta *= s;
  }
}

Mobius Mobius::rotation(double angle) noexcept { return {std::polar(1.0, angle / 2.0), Complex{0.0, 0.0}}; }

Mobius Mobius::translation(double distance) noexcept {
  return {Complex{std::cosh(distance / 2.0), 0.0}, Complex{std::sinh(distance / 2.0), 0.0}};
}

Mobius Mobius::recentering(Complex a) noexcept {
  const double s = 1.0 / std::sqrt(one_minus_norm(a));
  return {Complex{s, 0.0}, -a * s};
}

double psu_distance(const Mobius& a, const Mobius& b) noexcept {
  auto maxdiff = [](const Mobius& x, const Mobius& y, double sign) {
    return std::max(std::abs(x.alpha - sign * y.alpha), std::abs(x.beta - sign * y.beta));
  };
  return std::min(maxdiff(a, b, 1.0), maxdiff(a, b, -1.0));
}

Word freely_reduce(Word w) {
  Word out;
  out.reserve(w.size());
  for (int letter : w) {
    if (!out.empty() && out.back() == -letter)
      out.pop_back();
    else
      out.push_back(letter);
  }
  return out;
}

GroupElement GroupElement::operator*(const GroupElement& rhs) const {
  Word w = word;
  w.insert(w.end(), rhs.word.begin(), rhs.word.end());
  return {matrix * rhs.matrix, freely_reduce(std::move(w))};
}

GroupElement GroupElement::inverse() const {
  Word w(word.rbegin(), word.rend());
  for (int& letter : w) letter = -letter;
  return {matrix.inverse(), std::move(w)};
}

DiscPoint mobius_apply(const GroupElement& g, DiscPoint z) {
  require_unitary(g.matrix);
  return DiscPoint(g.matrix.apply(z.value()));
}

Complex jacobian(const GroupElement& g, DiscPoint z) {
  require_unitary(g.matrix);
  return g.matrix.jacobian(z.value());
}

Complex bergman_kernel(DiscPoint z, DiscPoint w) {
  const Complex d = 1.0 - z.value() * std::conj(w.value());
  return 1.0 / (std::numbers::pi * d * d);
}

double bergman_metric(DiscPoint z) { return bergman_metric_unchecked(z.value()); }

double distance(DiscPoint z, DiscPoint w) { return hyperbolic_distance(z.value(), w.value()); }

double df_integrand(Complex z) noexcept {
  const double d = one_minus_norm(z);
  const double dbar_sq = 4.0 * std::norm(z) / (d * d);
  return dbar_sq / bergman_metric_unchecked(z);
}

DfConstantReport df_constant(std::size_t radial_points) {
  DfConstantReport report;
  report.value_at_center = df_integrand(Complex{0.0, 0.0});
  // Radial grid clustered at the boundary; the integrand is radial, so one
  // ray suffices. The last node sits just inside the guard.
  const double r_max = 1.0 - 2.0 * kBoundaryGuard;
  for (std::size_t i = 0; i < radial_points; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(radial_points - 1);
    const double r = r_max * (1.0 - std::pow(1.0 - u, 3));
    report.grid_supremum = std::max(report.grid_supremum, df_integrand(Complex{r, 0.0}));
  }
  report.grid_points = radial_points;
  report.within_ishi_bound = report.grid_supremum <= report.ishi_bound;
  return report;
}

}  // namespace poincare
