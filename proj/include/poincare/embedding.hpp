#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "poincare/group.hpp"
#include "poincare/series.hpp"

namespace poincare {

// Numerical very-ampleness certificates. The sections are truncated
// Poincare series P_m(z^k), k = 0..d; at sample points we test that they
// separate jets (values and first derivatives have rank 2) and points
// (values at x and y have rank 2). Sampling cannot certify injectivity on
// the whole surface: a passing scan is evidence, not a proof.

/// Smallest / largest singular value above which a 2-row matrix counts as
/// rank 2.
inline constexpr double kRankTolerance = 1e-8;

struct SectionBasis {
  int m = 0;
  int d = 0;
  double radius = 0.0;
  std::vector<Complex> points;
  /// values[i][k] = P_m(z^k)(points[i]); derivatives likewise d/dz.
  std::vector<std::vector<Complex>> values;
  std::vector<std::vector<Complex>> derivatives;
  /// Largest tail estimate over the seeds at each point.
  std::vector<double> tails;
};

SectionBasis build_basis(const OrbitBall& ball, int m, int d, std::span<const Complex> points);

struct RankResult {
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  double ratio = 0.0;  ///< sigma_min / sigma_max
  bool passed = false;
};

/// Rank of a 2 x n matrix after scaling both rows to unit length (a row
/// operation, so the rank is unchanged and the ratio ignores the rows'
/// units).
RankResult two_row_rank(std::span<const Complex> row0, std::span<const Complex> row1,
                        double tolerance = kRankTolerance);

struct JetResult {
  Complex x;
  RankResult rank;
};

/// Values and derivatives of the basis at points[i]. DegenerateBasis when
/// every section vanishes there.
JetResult jet_separation_test(const SectionBasis& basis, std::size_t i, double tolerance = kRankTolerance);

struct PointResult {
  Complex x;
  Complex y;
  RankResult rank;
};

/// Values at points[i] and points[j]. EquivalentPoints when the two points
/// lie within 1e-6 of the same orbit.
PointResult point_separation_test(const FuchsianGroup& group, const SectionBasis& basis, std::size_t i,
                                  std::size_t j, double tolerance = kRankTolerance);

/// For equivalent points: sigma_min / sigma_max of the two value rows, which
/// vanishes when the projective images coincide.
double projective_gap(const SectionBasis& basis, std::size_t i, std::size_t j);

struct ScanOptions {
  int m = 4;
  int d = 6;
  double radius = 8.0;
  std::size_t samples = 100;
  std::uint64_t seed = 1;
  double tolerance = kRankTolerance;
  /// When set, the smallest m with (m - 2) epsilon > 2 is reported.
  std::optional<double> epsilon;
};

struct ScanReport {
  ScanOptions options;
  std::vector<JetResult> jets;
  std::vector<PointResult> pairs;
  double jet_pass_rate = 0.0;
  double point_pass_rate = 0.0;
  double min_jet_ratio = 0.0;
  double min_point_ratio = 0.0;
  double max_tail = 0.0;
  std::optional<int> predicted_m;  ///< smallest m with (m - 2) epsilon > 2
  bool passed = false;  ///< every jet and pair test passed
};

/// Jet tests at `samples` random points of the domain and point tests at
/// `samples` random inequivalent pairs, against a ball of the given radius
/// around the domain's center.
ScanReport very_ampleness_scan(const FuchsianGroup& group, const FundamentalDomain& domain,
                               const ScanOptions& options = {});

}  // namespace poincare
