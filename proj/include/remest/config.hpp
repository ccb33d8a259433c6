#ifndef REMEST_CONFIG_HPP
#define REMEST_CONFIG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "remest/source_model.hpp"

namespace remest {

/// One parsed config value: a number, a string, a list of numbers, or a
/// one-level table of named values.
struct ConfigValue {
  enum class Kind { Number, String, List, Table };
  Kind kind = Kind::Number;
  double number = 0.0;
  std::string str;
  std::vector<double> list;
  std::map<std::string, ConfigValue> table;
  int line = 0;
};

/// Parses the plain-text config format:
///   beta = 0.9
///   source = { kind = "birth-death", p = 0.3 }
///   distortion = { kind = "table", values = [0, 1, 1.5] }
/// Lines starting with # are comments. Errors carry line numbers.
std::map<std::string, ConfigValue> parse_config_text(const std::string& text);
std::map<std::string, ConfigValue> parse_config_file(const std::string& path);

struct SourceSpec {
  std::string kind = "birth-death";  // birth-death | banded
  double p = 0.3;
  std::vector<double> tail;

  MarkovSource make() const;
};

struct DistortionConfig {
  std::string kind = "absolute";  // absolute | hamming | power | table
  double exponent = 2.0;
  std::vector<double> values;

  Distortion make() const;
};

/// Everything a CLI run needs; flags override config-file values.
struct RunConfig {
  SourceSpec source;
  DistortionConfig distortion;
  double beta = 0.9;
  std::optional<double> alpha;
  std::optional<double> lambda;
  int k_min = 0;
  int k_max = 10;
  long long horizon = 0;  // 0: pick from beta
  std::size_t replicates = 8;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  int samples = 200;
  std::string format = "text";  // text | csv | json
  std::string out;              // empty: stdout
  std::string strategy;         // simulate: e.g. "threshold:2", "bernoulli:1,0.9"
  std::string trace;            // simulate: trajectory CSV path

  /// Canonical one-line rendering; hashed into output headers.
  std::string canonical() const;

  /// Applies `key = value` entries from a parsed config document.
  void apply(const std::map<std::string, ConfigValue>& doc);
};

}  // namespace remest

#endif
