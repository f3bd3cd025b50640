#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "poincare/group.hpp"
#include "poincare/quadrature.hpp"

namespace poincare {

/// Poles of rational seeds must stay at modulus >= this.
inline constexpr double kMinPoleModulus = 1.05;
inline constexpr int kMaxSeedDegree = 512;

/// A bounded holomorphic seed f for the series sum f(gamma z) j_gamma(z)^m.
class SeedFunction {
 public:
  enum class Kind { Polynomial, Rational, Callable };

  /// Coefficients low-to-high.
  static SeedFunction polynomial(std::vector<Complex> coefficients);
  static SeedFunction monomial(int k);
  static SeedFunction constant(Complex c) { return polynomial({c}); }
  /// numerator / denominator; the denominator must have no zero of modulus
  /// below kMinPoleModulus (UnboundedSeed otherwise).
  static SeedFunction rational(std::vector<Complex> numerator, std::vector<Complex> denominator);
  /// Arbitrary holomorphic function given with its derivative. The caller
  /// vouches for boundedness on the closed disc.
  static SeedFunction callable(std::function<Complex(Complex)> f, std::function<Complex(Complex)> df,
                               std::string label);
  /// "poly 1 0 0.5" or "rational 1 / 2 -1" (real coefficients, low-to-high).
  static SeedFunction parse(const std::string& spec);

  Kind kind() const noexcept { return kind_; }
  const std::vector<Complex>& coefficients() const noexcept { return num_; }
  const std::vector<Complex>& denominator() const noexcept { return den_; }
  int degree() const noexcept { return static_cast<int>(num_.size()) - 1; }
  /// Config-file spelling for polynomial/rational seeds, label otherwise.
  std::string to_string() const;

  Complex operator()(Complex z) const;
  Complex derivative(Complex z) const;
  /// max |f| over 4096 points of the unit circle (the maximum principle
  /// puts the sup of a function holomorphic past the circle there).
  double sup_norm() const noexcept { return sup_; }

  SeedFunction operator-(const SeedFunction& other) const;
  SeedFunction squared() const;

 private:
  void finish();

  Kind kind_ = Kind::Polynomial;
  std::vector<Complex> num_;
  std::vector<Complex> den_;
  std::function<Complex(Complex)> fn_;
  std::function<Complex(Complex)> dfn_;
  std::string label_;
  double sup_ = 0.0;
};

/// A truncated series value with its extrapolated tail.
struct SeriesValue {
  Complex value{0.0, 0.0};
  double tail_estimate = 0.0;  ///< estimate of the sum of |terms| beyond the ball
  std::size_t terms_used = 0;
  double radius_used = 0.0;
  double absolute_sum = 0.0;  ///< sum of |terms| inside the ball
};

/// Width of the displacement shells used for tail extrapolation.
inline constexpr double kShellWidth = 1.0;

/// Geometric extrapolation of the remainder from the last two displacement
/// shells (R - 2w, R - w] and (R - w, R]: with q = S_last / S_prev the
/// remainder is S_last q / (1 - q). Infinite when q >= 1, zero when the last
/// shell is empty and the previous one too.
double shell_tail(const OrbitBall& ball, std::span<const double> magnitudes);

/// sum over the ball of |j_gamma(z)|^2.
SeriesValue weight_sum(const OrbitBall& ball, Complex z);
SeriesValue weight_sum(const FuchsianGroup& group, DiscPoint x, DiscPoint z, double radius);

/// sum over the ball of f(gamma z) j_gamma(z)^m, compensated, in displacement
/// order. The tail is sup|f| times the extrapolated sum of |j|^m.
SeriesValue poincare_eval(const OrbitBall& ball, const SeedFunction& f, int m, Complex z);
SeriesValue poincare_eval(const FuchsianGroup& group, const SeedFunction& f, int m, DiscPoint z, double radius);
/// d/dz of the same truncated sum, term by term:
///   f'(gamma z) j^{m+1} - 2 m f(gamma z) j^m conj(beta) / (conj(beta) z + conj(alpha)).
SeriesValue poincare_derivative(const OrbitBall& ball, const SeedFunction& f, int m, Complex z);

struct AutomorphyRecord {
  Word gamma;
  Complex z;
  double residual = 0.0;  ///< |P(gamma z) j_gamma(z)^m - P(z)|
  /// max of the tail at z and the tail at gamma z rescaled by |j_gamma(z)|^m;
  /// the truncations differ by terms outside one ball or the other.
  double tail = 0.0;
  /// 1e-13 times the absolute sums on both sides: the rounding level, which
  /// dominates once the tail underflows it.
  double rounding_floor = 0.0;
  bool ok = false;  ///< residual <= 2 tail + rounding_floor
};

struct AutomorphyReport {
  int m = 0;
  std::string seed;
  double radius = 0.0;
  std::vector<AutomorphyRecord> records;
  double max_residual = 0.0;
  double max_ratio = 0.0;  ///< max residual / (2 tail + rounding_floor); <= 1 iff passed
  bool passed = false;
};

AutomorphyReport automorphy_check(const OrbitBall& ball, const SeedFunction& f, int m,
                                  std::span<const GroupElement> gammas, std::span<const Complex> points);

struct NormReport {
  double value = 0.0;
  double coarse = 0.0;
  double error_estimate = 0.0;
  int p = 1;
  double l = 0.0;
};

/// ||f||_{p,l} = integral over the disc of |f|^p K^{-l} against Lebesgue
/// measure, with a grid-halving error estimate.
NormReport norm_pl(const SeedFunction& f, int p, double l, const PolarGrid& grid = {});

/// For every node of the polar grid, the displacement rho(x, gamma x) of the
/// tile gamma F containing it (infinity beyond `radius` + circumradius,
/// where no tile of the ball can reach).
std::vector<double> tile_displacements(const FundamentalDomain& domain, const PolarGrid& grid, double radius);

struct UnfoldedBoundOptions {
  std::vector<double> radii{4.0, 6.0, 8.0};
  PolarGrid grid{};
  /// Spacing of the clipped grid on F used for the left-hand side.
  double spacing = 0.008;
  double slack = 0.01;               ///< LHS <= RHS (1 + slack)
  double unfolding_tolerance = 0.01;  ///< relative
};

/// Shared state for a batch of unfolded-bound checks on one domain.
struct UnfoldedBoundContext {
  const FundamentalDomain* domain = nullptr;
  OrbitBall ball;  ///< at the largest radius
  Quadrature f_grid;
  std::vector<double> tiles;
  UnfoldedBoundOptions options;
};

UnfoldedBoundContext make_unfolded_bound_context(const FuchsianGroup& group, const FundamentalDomain& domain,
                                    const UnfoldedBoundOptions& options = {});

struct UnfoldedBoundReport {
  int m = 0;
  std::string seed;
  std::vector<double> radii;
  std::vector<double> lhs;       ///< integral over F of the truncated absolute series, per radius
  std::vector<double> unfolded;  ///< integral of |f| K^{(2-m)/2} over the union of gamma F, per radius
  std::vector<double> unfolding_relative;
  double rhs = 0.0;  ///< ||f||_{1,(m-2)/2}
  double rhs_error = 0.0;
  double gap = 0.0;  ///< rhs - lhs at the largest radius
  bool lhs_le_rhs = false;
  bool monotone = false;
  bool unfolding_ok = false;
  bool passed = false;
};

UnfoldedBoundReport unfolded_bound_check(const UnfoldedBoundContext& context, const SeedFunction& f, int m);

struct PolynomialApproximation {
  SeedFunction polynomial;
  double t = 1.0;  ///< dilation f^t(z) = f(t z)
  int degree = 0;
  double achieved = 0.0;  ///< ||f - h||_{1,l}
  double dilation_error = 0.0;  ///< ||f - f^t||_{1,l}
};

/// Taylor truncation h of the dilation f^t with ||f - h||_{1,l} < delta: t
/// is chosen first (t = 1 - 2^{-k}, the first k with ||f - f^t|| < delta/2),
/// then the smallest degree N by doubling and bisection. TargetNotReached
/// past max_degree.
PolynomialApproximation polynomial_approx(const SeedFunction& f, double l, double delta, int max_degree = kMaxSeedDegree,
                                          const PolarGrid& grid = {});

struct SchwarzReport {
  double lhs = 0.0;         ///< ||P_m(f)||(z)^2, absolute series squared
  double rhs = 0.0;         ///< ||P_{2m-2}(f^2)||(z) * sum |j|^2
  double weight_sum = 0.0;  ///< sum |j|^2
  std::size_t prefixes_checked = 0;
  std::size_t prefix_violations = 0;
  bool passed = false;
};

/// The Cauchy-Schwarz bound, checked on every prefix of the ball (in
/// displacement order) with a relative slack of 1e-12.
SchwarzReport schwarz_bound_check(const OrbitBall& ball, const SeedFunction& f, int m, Complex z);

}  // namespace poincare
