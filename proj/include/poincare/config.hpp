#pragma once

#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "poincare/group.hpp"

namespace poincare {

/// Value kinds for experiment keys; values are validated when set.
enum class KeyKind { Integer, PositiveInteger, Real, PositiveReal, OptionalPositiveReal, Point, RealList, Text };

struct ConfigKey {
  const char* name;
  KeyKind kind;
  const char* fallback;  ///< default, as text ("" for unset optional keys)
  const char* help;
};

/// Every experiment key, in the order reports list them.
const std::vector<ConfigKey>& config_keys();

/// Resolved experiment settings. The file format is the group format plus
/// experiment keys:
///   # comment
///   m = 4
///   seed = poly 1 0 0.5
///   generator.0 = ...   (group keys build an inline group)
/// Later assignments win; command-line flags are applied after the file.
class ExperimentConfig {
 public:
  ExperimentConfig();

  /// Throws ConfigError naming `where` (e.g. "line 3" or "--m").
  void set(const std::string& key, const std::string& value, const std::string& where);
  void load(std::istream& in);
  void load_file(const std::string& path);

  bool has(const std::string& key) const;  ///< non-empty value
  const std::string& text(const std::string& key) const;
  double real(const std::string& key) const;
  std::optional<double> optional_real(const std::string& key) const;
  int integer(const std::string& key) const;
  Complex point(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;

  /// The group: inline group keys if any, else group_file, else the preset.
  FuchsianGroup group() const;
  /// Description of where the group came from, for reports.
  std::string group_source() const;

  /// Every key with its resolved text value.
  const std::map<std::string, std::string>& values() const noexcept { return values_; }

 private:
  std::map<std::string, std::string> values_;
  std::string inline_group_;  ///< group lines, blank-padded to keep line numbers
  bool has_inline_group_ = false;
};

}  // namespace poincare
