#include "poincare/group.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "poincare/parallel.hpp"
#include "poincare/summation.hpp"

namespace poincare {

// ---------------------------------------------------------------------------
// FuchsianGroup

GroupElement FuchsianGroup::evaluate(const Word& word) const {
  Mobius m;
  for (int letter : word) {
    const int k = std::abs(letter) - 1;
    if (letter == 0 || k >= static_cast<int>(generators.size()))
      throw Error(Errc::InvalidArgument, "word letter " + std::to_string(letter) + " out of range");
    m = m * (letter > 0 ? generators[k].matrix : generators[k].matrix.inverse());
  }
  return {m, word};
}

double FuchsianGroup::relator_residual() const {
  double worst = 0.0;
  for (const auto& r : relators) worst = std::max(worst, psu_distance(evaluate(r).matrix, Mobius::identity()));
  return worst;
}

double FuchsianGroup::max_generator_displacement() const {
  double s = 0.0;
  for (const auto& g : generators) s = std::max(s, hyperbolic_distance(center, g.matrix.apply(center)));
  return s;
}

double FuchsianGroup::min_generator_displacement(Complex x) const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& g : generators) d = std::min(d, hyperbolic_distance(x, g.matrix.apply(x)));
  return d;
}

FuchsianGroup FuchsianGroup::trivial() { return {"trivial", {}, {}, Complex{0.0, 0.0}}; }

FuchsianGroup preset_genus2_octagon() {
  // Regular octagon with interior angles pi/4: the center-to-side distance d
  // satisfies cosh d = cot(pi/8) = 1 + sqrt 2, and opposite sides are paired
  // by translations of length 2d.
  const double side_distance = std::acosh(1.0 + std::numbers::sqrt2);
  const Mobius t = Mobius::translation(2.0 * side_distance);
  FuchsianGroup g;
  g.name = "genus2-octagon";
  for (int k = 0; k < 8; ++k) {
    const double angle = k * std::numbers::pi / 4.0;
    const Mobius m = Mobius::rotation(angle) * t * Mobius::rotation(-angle);
    g.generators.push_back({m, Word{k + 1}});
  }
  g.relators.push_back(Word{1, 4, 7, 2, 5, 8, 3, 6});
  return g;
}

FuchsianGroup group_preset(const std::string& name) {
  if (name == "genus2" || name == "genus2-octagon") return preset_genus2_octagon();
  if (name == "trivial") return FuchsianGroup::trivial();
  throw Error(Errc::ConfigError, "unknown group preset '" + name + "'");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void config_error(int line, const std::string& msg) {
  throw Error(Errc::ConfigError, "line " + std::to_string(line) + ": " + msg);
}

std::vector<double> parse_numbers(const std::string& value, int line) {
  std::istringstream is(value);
  std::vector<double> out;
  std::string tok;
  while (is >> tok) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      config_error(line, "not a number: '" + tok + "'");
    }
  }
  return out;
}

}  // namespace

FuchsianGroup parse_group_config(std::istream& in) {
  FuchsianGroup g;
  g.name = "custom";
  std::vector<std::pair<int, Mobius>> gens;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    raw = trim(raw);
    if (raw.empty()) continue;
    const auto eq = raw.find('=');
    if (eq == std::string::npos) config_error(line, "expected 'key = value'");
    const std::string key = trim(raw.substr(0, eq));
    const std::string value = trim(raw.substr(eq + 1));
    if (key == "name") {
      g.name = value;
    } else if (key == "center") {
      const auto v = parse_numbers(value, line);
      if (v.size() != 2) config_error(line, "center needs 2 numbers");
      g.center = {v[0], v[1]};
      if (!DiscPoint::admissible(g.center)) config_error(line, "center outside the disc");
    } else if (key.rfind("generator.", 0) == 0) {
      int index = -1;
      try {
        index = std::stoi(key.substr(10));
      } catch (const std::exception&) {
        config_error(line, "bad generator index in '" + key + "'");
      }
      const auto v = parse_numbers(value, line);
      if (v.size() != 4) config_error(line, "generator needs 4 numbers: re(a) im(a) re(b) im(b)");
      Mobius m{{v[0], v[1]}, {v[2], v[3]}};
      if (m.unitarity_defect() > 1e-6) config_error(line, "generator is not in SU(1,1)");
      m.normalize();
      gens.emplace_back(index, m);
    } else if (key == "relator") {
      const auto v = parse_numbers(value, line);
      Word w;
      for (double x : v) {
        if (x == 0.0 || x != std::floor(x)) config_error(line, "relator letters are signed 1-based integers");
        w.push_back(static_cast<int>(x));
      }
      g.relators.push_back(std::move(w));
    } else {
      config_error(line, "unknown key '" + key + "'");
    }
  }
  std::sort(gens.begin(), gens.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (gens[i].first != static_cast<int>(i))
      throw Error(Errc::ConfigError, "generator indices must be 0..n-1 without gaps");
    g.generators.push_back({gens[i].second, Word{static_cast<int>(i) + 1}});
  }
  for (const auto& r : g.relators)
    for (int letter : r)
      if (std::abs(letter) > static_cast<int>(g.generators.size()))
        throw Error(Errc::ConfigError, "relator letter " + std::to_string(letter) + " has no generator");
  return g;
}

FuchsianGroup load_group_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ConfigError, "cannot open group file '" + path + "'");
  return parse_group_config(in);
}

std::string format_group_config(const FuchsianGroup& group) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "name = " << group.name << "\n";
  if (group.center != Complex{0.0, 0.0}) os << "center = " << group.center.real() << " " << group.center.imag() << "\n";
  for (std::size_t k = 0; k < group.generators.size(); ++k) {
    const auto& m = group.generators[k].matrix;
    os << "generator." << k << " = " << m.alpha.real() << " " << m.alpha.imag() << " " << m.beta.real() << " "
       << m.beta.imag() << "\n";
  }
  for (const auto& r : group.relators) {
    os << "relator =";
    for (int letter : r) os << " " << letter;
    os << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Ball enumeration

std::vector<Complex> OrbitBall::orbit_points() const {
  std::vector<Complex> pts;
  pts.reserve(elements.size());
  for (const auto& e : elements) pts.push_back(e.element.matrix.apply(base));
  return pts;
}

namespace {

/// Displacement rho(x, m x), computed by conjugating x to the origin.
double displacement_at(const Mobius& to_origin, const Mobius& from_origin, const Mobius& m) {
  return origin_displacement(to_origin * m * from_origin);
}

struct BfsNode {
  Mobius matrix;
  std::int64_t parent = -1;
  int letter = 0;
};

/// Dedup index keyed by the conjugated product alpha * beta, which equals
/// w / (1 - |w|^2) for the orbit point w of the center. Distinct orbit
/// points of a discrete group sit O(1) apart in this coordinate.
class DedupIndex {
 public:
  explicit DedupIndex(double tolerance) : tolerance_(tolerance) {}

  static constexpr double kCell = 0.25;

  /// Index of an element within tolerance of m, or -1.
  std::int64_t find(Complex key, const Mobius& m, const std::vector<BfsNode>& nodes) const {
    const double fx = key.real() / kCell;
    const double fy = key.imag() / kCell;
    const auto ix = static_cast<std::int64_t>(std::floor(fx));
    const auto iy = static_cast<std::int64_t>(std::floor(fy));
    const std::int64_t nx = (fx - static_cast<double>(ix)) < 0.5 ? ix - 1 : ix + 1;
    const std::int64_t ny = (fy - static_cast<double>(iy)) < 0.5 ? iy - 1 : iy + 1;
    const std::int64_t cells[4][2] = {{ix, iy}, {nx, iy}, {ix, ny}, {nx, ny}};
    for (const auto& c : cells) {
      auto [lo, hi] = map_.equal_range(pack(c[0], c[1]));
      for (auto it = lo; it != hi; ++it) {
        const Mobius& other = nodes[it->second].matrix;
        const double scale = std::max(1.0, std::abs(other.alpha));
        if (psu_distance(m, other) <= tolerance_ * scale) return static_cast<std::int64_t>(it->second);
      }
    }
    return -1;
  }

  void insert(Complex key, std::size_t index) {
    const auto ix = static_cast<std::int64_t>(std::floor(key.real() / kCell));
    const auto iy = static_cast<std::int64_t>(std::floor(key.imag() / kCell));
    map_.emplace(pack(ix, iy), static_cast<std::uint32_t>(index));
  }

  void reserve(std::size_t n) { map_.reserve(n); }

 private:
  static std::uint64_t pack(std::int64_t x, std::int64_t y) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) << 32) |
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(y));
  }

  double tolerance_;
  std::unordered_multimap<std::uint64_t, std::uint32_t> map_;
};

struct Letter {
  int label;
  Mobius matrix;
};

/// Generators and inverses with PSU(1,1) duplicates and the identity removed.
std::vector<Letter> distinct_letters(const FuchsianGroup& group) {
  std::vector<Letter> letters;
  auto push = [&](int label, const Mobius& m) {
    if (psu_distance(m, Mobius::identity()) < 1e-12) return;
    for (const auto& l : letters)
      if (psu_distance(l.matrix, m) < 1e-12) return;
    letters.push_back({label, m});
  };
  for (std::size_t k = 0; k < group.generators.size(); ++k)
    push(static_cast<int>(k) + 1, group.generators[k].matrix);
  for (std::size_t k = 0; k < group.generators.size(); ++k)
    push(-(static_cast<int>(k) + 1), group.generators[k].matrix.inverse());
  return letters;
}

}  // namespace

OrbitBall enumerate_ball(const FuchsianGroup& group, DiscPoint x, double radius, const EnumerationOptions& options) {
  if (!(radius > 0.0)) throw Error(Errc::InvalidArgument, "ball radius must be positive");
  for (const auto& g : group.generators)
    if (g.matrix.unitarity_defect() > kUnitaryTolerance) throw Error(Errc::NonUnitary, "generator not in SU(1,1)");

  const Complex c = group.center;
  const Mobius c_to_origin = Mobius::recentering(c);
  const Mobius c_from_origin = c_to_origin.inverse();
  const Mobius x_to_origin = Mobius::recentering(x.value());
  const Mobius x_from_origin = x_to_origin.inverse();

  const double search_radius = radius + 2.0 * hyperbolic_distance(x.value(), c);
  const double prune = search_radius + group.max_generator_displacement();
  const auto letters = distinct_letters(group);

  std::vector<BfsNode> nodes;
  nodes.push_back({Mobius::identity(), -1, 0});
  DedupIndex index(options.dedup_tolerance);
  index.insert(Complex{0.0, 0.0}, 0);

  struct Candidate {
    Mobius matrix;
    Complex key;
    double displacement;
  };

  std::size_t level_begin = 0;
  std::size_t level_end = 1;
  std::vector<Candidate> candidates;
  while (level_begin < level_end) {
    const std::size_t frontier = level_end - level_begin;
    candidates.assign(frontier * letters.size(), Candidate{});
    parallel::for_each_index(frontier, [&](std::size_t i) {
      const BfsNode& node = nodes[level_begin + i];
      for (std::size_t l = 0; l < letters.size(); ++l) {
        const Mobius m = node.matrix * letters[l].matrix;
        const Mobius conj = c_to_origin * m * c_from_origin;
        candidates[i * letters.size() + l] = {m, conj.alpha * conj.beta, origin_displacement(conj)};
      }
    });
    // Sequential merge in a fixed order keeps node numbering deterministic.
    for (std::size_t i = 0; i < frontier; ++i) {
      for (std::size_t l = 0; l < letters.size(); ++l) {
        const Candidate& cand = candidates[i * letters.size() + l];
        if (cand.displacement > prune) continue;
        if (index.find(cand.key, cand.matrix, nodes) >= 0) continue;
        index.insert(cand.key, nodes.size());
        nodes.push_back({cand.matrix, static_cast<std::int64_t>(level_begin + i), letters[l].label});
        if (nodes.size() > options.budget)
          throw Error(Errc::BudgetExceeded,
                      "ball enumeration passed " + std::to_string(options.budget) + " elements");
      }
    }
    level_begin = level_end;
    level_end = nodes.size();
  }

  OrbitBall ball;
  ball.base = x.value();
  ball.radius = radius;
  ball.explored = nodes.size();
  std::vector<double> disp(nodes.size());
  parallel::for_each_index(nodes.size(),
                           [&](std::size_t i) { disp[i] = displacement_at(x_to_origin, x_from_origin, nodes[i].matrix); });
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (disp[i] <= radius) keep.push_back(i);
  std::stable_sort(keep.begin(), keep.end(), [&](std::size_t a, std::size_t b) { return disp[a] < disp[b]; });
  ball.elements.reserve(keep.size());
  for (std::size_t i : keep) {
    Word w;
    for (std::int64_t n = static_cast<std::int64_t>(i); nodes[n].parent >= 0; n = nodes[n].parent)
      w.push_back(nodes[n].letter);
    std::reverse(w.begin(), w.end());
    ball.elements.push_back({{nodes[i].matrix, std::move(w)}, disp[i]});
  }
  return ball;
}

// ---------------------------------------------------------------------------
// Dirichlet domain


double FundamentalDomain::violation(Complex z) const noexcept {
  const Complex k = poincare_to_klein(to_frame.apply(z));
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& s : sides) worst = std::max(worst, (k * std::conj(s.normal)).real() - s.offset);
  return worst;
}

std::vector<Complex> FundamentalDomain::boundary_samples(std::size_t per_side) const {
  std::vector<Complex> out;
  const Mobius back = to_frame.inverse();
  const std::size_t n = klein_vertices.size();
  out.reserve(n * per_side);
  for (std::size_t i = 0; i < n; ++i) {
    const Complex a = klein_vertices[i];
    const Complex b = klein_vertices[(i + 1) % n];
    for (std::size_t j = 0; j < per_side; ++j) {
      const double t = static_cast<double>(j) / static_cast<double>(per_side);
      out.push_back(back.apply(klein_to_poincare(a + t * (b - a))));
    }
  }
  return out;
}

namespace {

struct HalfPlane {
  Complex normal;
  double offset;
  std::size_t element;  // index into the orbit ball
};

std::vector<Complex> clip(const std::vector<Complex>& poly, const HalfPlane& h) {
  std::vector<Complex> out;
  const std::size_t n = poly.size();
  out.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const Complex p = poly[i];
    const Complex q = poly[(i + 1) % n];
    const double sp = (p * std::conj(h.normal)).real() - h.offset;
    const double sq = (q * std::conj(h.normal)).real() - h.offset;
    if (sp <= 0.0) out.push_back(p);
    if ((sp < 0.0 && sq > 0.0) || (sp > 0.0 && sq < 0.0)) out.push_back(p + (sp / (sp - sq)) * (q - p));
  }
  return out;
}

std::vector<Complex> merge_close(const std::vector<Complex>& poly, double tol) {
  std::vector<Complex> out;
  for (const Complex& p : poly)
    if (out.empty() || std::abs(p - out.back()) > tol) out.push_back(p);
  while (out.size() > 1 && std::abs(out.front() - out.back()) <= tol) out.pop_back();
  return out;
}

double polyline_area(const std::vector<Complex>& pts) {
  CompensatedSum s;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Complex a = pts[i];
    const Complex b = pts[(i + 1) % pts.size()];
    s += a.real() * b.imag() - b.real() * a.imag();
  }
  return 0.5 * s.value();
}

}  // namespace

Quadrature clipped_grid(const FundamentalDomain& domain, double spacing, int subsamples) {
  if (!(spacing > 0.0)) throw Error(Errc::InvalidArgument, "grid spacing must be positive");
  const auto outline = domain.boundary_samples(64);
  double xmin = 1.0, xmax = -1.0, ymin = 1.0, ymax = -1.0;
  for (const Complex& p : outline) {
    xmin = std::min(xmin, p.real());
    xmax = std::max(xmax, p.real());
    ymin = std::min(ymin, p.imag());
    ymax = std::max(ymax, p.imag());
  }
  xmin -= spacing;
  ymin -= spacing;
  const auto nx = static_cast<std::size_t>(std::ceil((xmax - xmin) / spacing)) + 1;
  const auto ny = static_cast<std::size_t>(std::ceil((ymax - ymin) / spacing)) + 1;
  const double h = spacing;

  // Cells holding a vertex are always sub-sampled (thin wedges can miss all
  // five probe points).
  std::vector<std::pair<std::size_t, std::size_t>> vertex_cells;
  for (const Complex& v : domain.vertices)
    vertex_cells.emplace_back(static_cast<std::size_t>((v.real() - xmin) / h),
                              static_cast<std::size_t>((v.imag() - ymin) / h));

  std::vector<Quadrature> rows(ny);
  parallel::for_each_index(ny, [&](std::size_t j) {
    Quadrature& row = rows[j];
    const double y0 = ymin + static_cast<double>(j) * h;
    for (std::size_t i = 0; i < nx; ++i) {
      const double x0 = xmin + static_cast<double>(i) * h;
      const Complex mid{x0 + 0.5 * h, y0 + 0.5 * h};
      const bool in_mid = domain.contains(mid);
      bool uniform = in_mid == domain.contains({x0, y0}) && in_mid == domain.contains({x0 + h, y0}) &&
                     in_mid == domain.contains({x0, y0 + h}) && in_mid == domain.contains({x0 + h, y0 + h});
      for (const auto& vc : vertex_cells)
        if (vc.first == i && vc.second == j) uniform = false;
      if (uniform) {
        if (in_mid) {
          row.nodes.push_back(mid);
          row.weights.push_back(h * h);
        }
        continue;
      }
      const int s = subsamples;
      int inside = 0;
      Complex centroid{0.0, 0.0};
      for (int a = 0; a < s; ++a)
        for (int b = 0; b < s; ++b) {
          const Complex p{x0 + (a + 0.5) * h / s, y0 + (b + 0.5) * h / s};
          if (domain.contains(p)) {
            ++inside;
            centroid += p;
          }
        }
      if (inside == 0) continue;
      centroid /= static_cast<double>(inside);
      if (!domain.contains(centroid)) {
        // Non-convex sliver: fall back to the inside sub-sample nearest the centroid.
        double best = std::numeric_limits<double>::infinity();
        Complex pick = centroid;
        for (int a = 0; a < s; ++a)
          for (int b = 0; b < s; ++b) {
            const Complex p{x0 + (a + 0.5) * h / s, y0 + (b + 0.5) * h / s};
            if (domain.contains(p) && std::abs(p - centroid) < best) {
              best = std::abs(p - centroid);
              pick = p;
            }
          }
        centroid = pick;
      }
      row.nodes.push_back(centroid);
      row.weights.push_back(h * h * inside / static_cast<double>(s * s));
    }
  });
  Quadrature q;
  for (auto& r : rows) {
    q.nodes.insert(q.nodes.end(), r.nodes.begin(), r.nodes.end());
    q.weights.insert(q.weights.end(), r.weights.begin(), r.weights.end());
  }
  return q;
}

FundamentalDomain dirichlet_domain(const FuchsianGroup& group, DiscPoint x, const DomainOptions& options) {
  if (group.generators.empty())
    throw Error(Errc::InvalidArgument, "group has no generators; the Dirichlet domain is the whole disc");
  FundamentalDomain dom;
  dom.center = x.value();
  dom.to_frame = Mobius::recentering(x.value());

  double ball_radius = 2.0 * group.min_generator_displacement(x.value()) + options.margin;
  for (int attempt = 0;; ++attempt) {
    const OrbitBall ball = enumerate_ball(group, x, ball_radius, options.enumeration);
    std::vector<HalfPlane> planes;
    for (std::size_t i = 1; i < ball.elements.size(); ++i) {
      const Complex p = dom.to_frame.apply(ball.elements[i].element.matrix.apply(x.value()));
      planes.push_back({p / std::abs(p), std::tanh(ball.elements[i].displacement / 2.0), i});
    }
    std::vector<Complex> poly = {{-1.0, -1.0}, {1.0, -1.0}, {1.0, 1.0}, {-1.0, 1.0}};
    for (const auto& h : planes) {
      poly = clip(poly, h);
      if (poly.empty()) throw Error(Errc::InvalidArgument, "empty Dirichlet polygon");
    }
    poly = merge_close(poly, 1e-10);

    bool compact = true;
    double circum = 0.0;
    for (const Complex& k : poly) {
      if (std::abs(k) >= 1.0 - 1e-12) compact = false;
      circum = std::max(circum, hyperbolic_distance(0.0, klein_to_poincare(k)));
    }
    if (compact && 2.0 * circum <= ball_radius) {
      dom.klein_vertices = poly;
      dom.circumradius = circum;
      dom.ball_radius = ball_radius;
      const std::size_t n = poly.size();
      for (std::size_t i = 0; i < n; ++i) {
        const Complex a = poly[i];
        const Complex b = poly[(i + 1) % n];
        double best = std::numeric_limits<double>::infinity();
        const HalfPlane* side = nullptr;
        for (const auto& h : planes) {
          const double ra = std::abs((a * std::conj(h.normal)).real() - h.offset);
          const double rb = std::abs((b * std::conj(h.normal)).real() - h.offset);
          if (std::max(ra, rb) < best) {
            best = std::max(ra, rb);
            side = &h;
          }
        }
        if (side == nullptr || best > 1e-8)
          throw Error(Errc::InvalidArgument, "polygon edge does not lie on a bisector");
        dom.sides.push_back({ball.elements[side->element].element, side->normal, side->offset});
      }
      const Mobius back = dom.to_frame.inverse();
      for (const Complex& k : poly) dom.vertices.push_back(back.apply(klein_to_poincare(k)));
      break;
    }
    if (attempt >= options.max_retries)
      throw Error(Errc::InsufficientBall, "Dirichlet polygon not stable up to ball radius " + std::to_string(ball_radius));
    ball_radius = std::max(ball_radius + options.margin, compact ? 2.0 * circum + options.margin : 2.0 * ball_radius);
  }

  dom.euclidean_area = polyline_area(dom.boundary_samples(4096));
  dom.grid_spacing = options.grid_spacing;
  dom.quadrature = clipped_grid(dom, options.grid_spacing, options.boundary_subsamples);
  return dom;
}

Reduction reduce_to_domain(const FundamentalDomain& domain, Complex z, int max_steps) {
  Reduction r{GroupElement::identity(), z, 0};
  for (; r.steps < max_steps; ++r.steps) {
    const Complex k = poincare_to_klein(domain.to_frame.apply(r.image));
    double worst = 0.0;
    const DomainSide* side = nullptr;
    for (const auto& s : domain.sides) {
      const double v = (k * std::conj(s.normal)).real() - s.offset;
      if (v > worst) {
        worst = v;
        side = &s;
      }
    }
    if (side == nullptr) return r;
    const GroupElement step = side->pairing.inverse();
    r.element = step * r.element;
    r.image = step.matrix.apply(r.image);
  }
  throw Error(Errc::BudgetExceeded, "reduction into the fundamental domain did not terminate");
}

// ---------------------------------------------------------------------------
// Counting

std::size_t orbit_count(std::span<const Complex> orbit_points, Complex z, double r) {
  const double limit = r * (1.0 - 1e-12);
  std::size_t n = 0;
  for (const Complex& p : orbit_points)
    if (hyperbolic_distance(p, z) < limit) ++n;
  return n;
}

std::size_t orbit_count(const FuchsianGroup& group, DiscPoint x, DiscPoint z, double r,
                        const EnumerationOptions& options) {
  if (!(r > 0.0)) throw Error(Errc::InvalidArgument, "count radius must be positive");
  const OrbitBall ball = enumerate_ball(group, x, distance(x, z) + r, options);
  const auto pts = ball.orbit_points();
  return orbit_count(pts, z.value(), r);
}

TilingReport tiling_check(const FuchsianGroup& group, const FundamentalDomain& domain,
                          std::span<const Complex> points) {
  TilingReport rep;
  rep.samples = points.size();
  double reach = 0.0;
  for (const Complex& z : points) reach = std::max(reach, hyperbolic_distance(domain.center, z));
  rep.ball_radius = reach + domain.circumradius + 0.5;
  const OrbitBall ball = enumerate_ball(group, DiscPoint(domain.center), rep.ball_radius);
  std::vector<std::size_t> hits(points.size(), 0);
  parallel::for_each_index(points.size(), [&](std::size_t i) {
    for (const auto& e : ball.elements)
      if (domain.contains(e.element.matrix.apply(points[i]))) ++hits[i];
  });
  for (std::size_t h : hits) {
    if (h == 0)
      ++rep.none;
    else if (h == 1)
      ++rep.exactly_one;
    else
      ++rep.multiple;
  }
  return rep;
}

double min_fixed_point_distance(const OrbitBall& ball, std::span<const Complex> points) {
  std::vector<double> best(points.size(), std::numeric_limits<double>::infinity());
  parallel::for_each_index(points.size(), [&](std::size_t i) {
    for (std::size_t k = 1; k < ball.elements.size(); ++k)
      best[i] = std::min(best[i], hyperbolic_distance(points[i], ball.elements[k].element.matrix.apply(points[i])));
  });
  return best.empty() ? std::numeric_limits<double>::infinity() : *std::min_element(best.begin(), best.end());
}

}  // namespace poincare
