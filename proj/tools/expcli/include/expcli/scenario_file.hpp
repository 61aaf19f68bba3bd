#pragma once

// Plain-text scenario files:
//
//   # comment
//   p_s_db = 10          keys ending in _db are decibels, bare keys linear
//   scheme = rate        rate | power | both
//   q = 0.1
//
//   [sweep]
//   variable = p_r_max_db
//   start = 0
//   stop = 30
//   points = 31
//   spacing = linear     linear | log
//
//   [series]
//   variable = sigma_d_sq_db
//   values = -5, 0, 5, 10

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "covert/scenario.hpp"

namespace expcli {

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SchemeChoice { Rate, Power, Both };
enum class Spacing { Linear, Log };

struct SweepSpec {
  std::string variable;
  double start = 0.0;
  double stop = 0.0;
  std::size_t points = 2;
  Spacing spacing = Spacing::Linear;

  [[nodiscard]] std::vector<double> values() const;
  bool operator==(const SweepSpec&) const = default;
};

struct SeriesSpec {
  std::string variable;
  std::vector<double> values;
  bool operator==(const SeriesSpec&) const = default;
};

struct Scenario {
  covert::SystemParams params;
  std::optional<double> h_sr_sq;  // unset: 1 for single evaluations, random when averaging
  std::optional<double> h_rs_sq;  // unset: equal to h_sr_sq
  SchemeChoice scheme = SchemeChoice::Rate;
  std::optional<double> q;
  std::optional<double> p_delta;
  std::optional<SweepSpec> sweep;
  std::optional<SeriesSpec> series;

  bool operator==(const Scenario&) const = default;

  [[nodiscard]] covert::SourceLink link() const;
  /// Configured schemes in rate, power order. Throws ScenarioError when the
  /// matching q / p_delta is missing.
  [[nodiscard]] std::vector<covert::SchemeConfig> schemes() const;
};

/// True for every key that holds a number and can be swept.
[[nodiscard]] bool is_numeric_key(std::string_view key);

/// Sets a numeric key, converting _db keys to linear. Throws ScenarioError
/// for unknown keys.
void set_value(Scenario& scenario, std::string_view key, double value);

/// Throws ScenarioError with "name:line:" prefixes on malformed input.
[[nodiscard]] Scenario parse_scenario(std::istream& in, const std::string& name = "<input>");
[[nodiscard]] Scenario load_scenario(const std::filesystem::path& path);

/// Linear keys, 17 significant digits: parsing the result gives back an
/// identical scenario.
[[nodiscard]] std::string serialize(const Scenario& scenario);

[[nodiscard]] std::string_view to_string(SchemeChoice choice);

}  // namespace expcli
