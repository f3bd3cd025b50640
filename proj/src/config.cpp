#include "poincare/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "poincare/error.hpp"

namespace poincare {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> tokens(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

bool parse_double(const std::string& s, double& out) {
  const char* b = s.data();
  const char* e = b + s.size();
  if (b != e && *b == '+') ++b;
  const auto [p, ec] = std::from_chars(b, e, out);
  return ec == std::errc{} && p == e && std::isfinite(out);
}

bool parse_int(const std::string& s, long long& out) {
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && p == s.data() + s.size();
}

bool is_group_key(const std::string& key) {
  return key == "name" || key == "center" || key == "relator" || key.rfind("generator.", 0) == 0;
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(Errc::ConfigError, where + ": " + what);
}

const ConfigKey* find_key(const std::string& name) {
  for (const auto& k : config_keys())
    if (name == k.name) return &k;
  return nullptr;
}

void validate(const ConfigKey& key, const std::string& value, const std::string& where) {
  const std::string what = std::string("'") + key.name + "' ";
  switch (key.kind) {
    case KeyKind::Integer:
    case KeyKind::PositiveInteger: {
      long long v = 0;
      if (!parse_int(value, v)) fail(where, what + "expects an integer, got '" + value + "'");
      if (key.kind == KeyKind::PositiveInteger && v <= 0) fail(where, what + "must be positive");
      if (std::string(key.name) == "m" && v < 2) fail(where, "weight m must be >= 2");
      if (v > 1'000'000'000LL || v < -1'000'000'000LL) fail(where, what + "is out of range");
      break;
    }
    case KeyKind::Real:
    case KeyKind::PositiveReal:
    case KeyKind::OptionalPositiveReal: {
      if (value.empty() && key.kind == KeyKind::OptionalPositiveReal) break;
      double v = 0.0;
      if (!parse_double(value, v)) fail(where, what + "expects a number, got '" + value + "'");
      if (key.kind != KeyKind::Real && !(v > 0.0)) fail(where, what + "must be positive");
      break;
    }
    case KeyKind::Point: {
      const auto t = tokens(value);
      double a = 0.0, b = 0.0;
      if (t.size() != 2 || !parse_double(t[0], a) || !parse_double(t[1], b))
        fail(where, what + "expects '<re> <im>', got '" + value + "'");
      if (!DiscPoint::admissible(Complex{a, b})) fail(where, what + "must lie inside the unit disc");
      break;
    }
    case KeyKind::RealList: {
      const auto t = tokens(value);
      if (t.empty()) fail(where, what + "expects at least one number");
      for (const auto& s : t) {
        double v = 0.0;
        if (!parse_double(s, v) || !(v > 0.0)) fail(where, what + "expects positive numbers, got '" + s + "'");
      }
      break;
    }
    case KeyKind::Text:
      break;
  }
}

}  // namespace

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys{
      {"group", KeyKind::Text, "genus2", "group preset: genus2 | trivial"},
      {"group_file", KeyKind::Text, "", "group description file (overrides the preset)"},
      {"x", KeyKind::Point, "0 0", "base point: domain center, Seshadri point"},
      {"z", KeyKind::Point, "0.1 0.05", "evaluation point"},
      {"m", KeyKind::PositiveInteger, "4", "weight (>= 2)"},
      {"seed", KeyKind::Text, "poly 1", "seed function, e.g. 'poly 1 0 0.5' or 'rational 1 / 2 -1'"},
      {"radius", KeyKind::PositiveReal, "10", "orbit ball radius R"},
      {"outer_radius", KeyKind::PositiveReal, "6", "outer ball radius for the round trip"},
      {"radii", KeyKind::RealList, "4 6 8", "truncation radii for lemma22-check"},
      {"polar_radial", KeyKind::PositiveInteger, "800", "polar grid radial nodes"},
      {"polar_angular", KeyKind::PositiveInteger, "512", "polar grid angular nodes"},
      {"domain_spacing", KeyKind::PositiveReal, "0.004", "fundamental-domain quadrature spacing"},
      {"unfolded_spacing", KeyKind::PositiveReal, "0.008", "domain grid spacing for the lemma22-check left side"},
      {"roundtrip_spacing", KeyKind::PositiveReal, "0.008", "domain grid spacing for the round trip"},
      {"psh_spacing", KeyKind::PositiveReal, "0.0125", "domain grid spacing for the quasi-psh check"},
      {"samples", KeyKind::PositiveInteger, "20", "sample points / pairs"},
      {"rng_seed", KeyKind::Integer, "1", "random seed"},
      {"d", KeyKind::PositiveInteger, "6", "seed degree of the section basis"},
      {"epsilon", KeyKind::OptionalPositiveReal, "", "Seshadri constant (lower bound)"},
      {"n", KeyKind::PositiveInteger, "1", "complex dimension"},
      {"C", KeyKind::OptionalPositiveReal, "", "Donnelly-Fefferman constant C(Omega)"},
      {"r", KeyKind::OptionalPositiveReal, "", "cut-off / density radius (default: rho_x)"},
      {"multipliers", KeyKind::RealList, "1 1.25 1.5 2 3", "radius candidates as multiples of rho_x"},
      {"global_samples", KeyKind::Integer, "0", "points of F for the global Seshadri estimate (0: x only)"},
      {"h", KeyKind::PositiveReal, "0.001", "finite-difference step"},
      {"p", KeyKind::PositiveInteger, "1", "norm exponent (1 or 2)"},
      {"l", KeyKind::Real, "1", "norm weight exponent"},
      {"delta", KeyKind::PositiveReal, "0.001", "polynomial approximation target"},
      {"max_degree", KeyKind::PositiveInteger, "512", "polynomial approximation degree cap"},
      {"output", KeyKind::Text, "-", "JSON report path ('-' for stdout)"},
      {"csv", KeyKind::Text, "", "optional CSV path for grid data"},
      {"threads", KeyKind::Integer, "0", "worker cap (0: POINCARE_THREADS or hardware)"},
  };
  return keys;
}

ExperimentConfig::ExperimentConfig() {
  for (const auto& k : config_keys()) values_[k.name] = k.fallback;
}

void ExperimentConfig::set(const std::string& key, const std::string& value, const std::string& where) {
  const ConfigKey* k = find_key(key);
  if (!k) fail(where, "unknown key '" + key + "'");
  const std::string v = trim(value);
  validate(*k, v, where);
  values_[key] = v;
}

void ExperimentConfig::load(std::istream& in) {
  std::ostringstream group_lines;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    const std::string body = trim(line.substr(0, line.find('#')));
    if (body.empty()) {
      group_lines << '\n';
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) fail("line " + std::to_string(lineno), "expected 'key = value'");
    const std::string key = trim(body.substr(0, eq));
    if (is_group_key(key)) {
      group_lines << line << '\n';
      has_inline_group_ = true;
      continue;
    }
    group_lines << '\n';
    set(key, body.substr(eq + 1), "line " + std::to_string(lineno));
  }
  if (has_inline_group_) {
    inline_group_ = group_lines.str();
    group();  // surface group errors while the file is being read
  }
}

void ExperimentConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ConfigError, "cannot open config file '" + path + "'");
  try {
    load(in);
  } catch (const Error& e) {
    // Re-label with the path, dropping the code prefix of the inner message.
    const std::string what = e.what();
    const auto colon = what.find(": ");
    throw Error(e.code(), path + ": " + (colon == std::string::npos ? what : what.substr(colon + 2)));
  }
}

bool ExperimentConfig::has(const std::string& key) const {
  const auto it = values_.find(key);
  return it != values_.end() && !it->second.empty();
}

const std::string& ExperimentConfig::text(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw Error(Errc::ConfigError, "unknown key '" + key + "'");
  return it->second;
}

double ExperimentConfig::real(const std::string& key) const {
  double v = 0.0;
  if (!parse_double(text(key), v)) throw Error(Errc::ConfigError, "'" + key + "' is not set");
  return v;
}

std::optional<double> ExperimentConfig::optional_real(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return real(key);
}

int ExperimentConfig::integer(const std::string& key) const {
  long long v = 0;
  if (!parse_int(text(key), v)) throw Error(Errc::ConfigError, "'" + key + "' is not an integer");
  return static_cast<int>(v);
}

Complex ExperimentConfig::point(const std::string& key) const {
  const auto t = tokens(text(key));
  double a = 0.0, b = 0.0;
  if (t.size() != 2 || !parse_double(t[0], a) || !parse_double(t[1], b))
    throw Error(Errc::ConfigError, "'" + key + "' is not a point");
  return {a, b};
}

std::vector<double> ExperimentConfig::reals(const std::string& key) const {
  std::vector<double> out;
  for (const auto& t : tokens(text(key))) {
    double v = 0.0;
    if (!parse_double(t, v)) throw Error(Errc::ConfigError, "'" + key + "' is not a list of numbers");
    out.push_back(v);
  }
  return out;
}

FuchsianGroup ExperimentConfig::group() const {
  if (has_inline_group_) {
    std::istringstream in(inline_group_);
    return parse_group_config(in);
  }
  if (has("group_file")) return load_group_config(text("group_file"));
  return group_preset(text("group"));
}

std::string ExperimentConfig::group_source() const {
  if (has_inline_group_) return "inline";
  if (has("group_file")) return "file:" + text("group_file");
  return "preset:" + text("group");
}

}  // namespace poincare
