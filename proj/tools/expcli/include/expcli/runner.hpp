#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "expcli/scenario_file.hpp"
#include "expcli/table.hpp"

namespace expcli {

enum class Mode {
  Eval,      // the base point only
  Sweep,     // every [series] x [sweep] point
  Optimize,  // covert rate maximized per point
  Verify,    // every point plus Monte Carlo columns
  Average,   // Optimize averaged over random source-relay gains
};

struct RunOptions {
  std::optional<std::uint64_t> trials;  // Monte Carlo trials or source draws
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0: hardware concurrency
  bool monte_carlo = false;  // Eval and Sweep: add the Monte Carlo columns
};

inline constexpr std::uint64_t kDefaultVerifyTrials = 1'000'000;
inline constexpr std::uint64_t kDefaultAverageDraws = 1'000;

struct RunResult {
  Table table;
  PlotSpec plot;
  bool checks_passed = true;  // false when a Monte Carlo column misses by > 3 SE
  std::vector<std::string> warnings;
};

/// One evaluation point: the scenario with the series and sweep values
/// applied.
struct Point {
  std::optional<double> series_value;
  std::optional<double> sweep_value;
  Scenario scenario;
};

/// Series outer, sweep inner. A scenario without either gives one point.
[[nodiscard]] std::vector<Point> expand_points(const Scenario& scenario);

/// Throws ScenarioError when the scenario does not fit the mode (Sweep
/// without a [sweep], Average with fixed h_sr_sq or h_rs_sq) and
/// covert::Error for invalid swept parameters.
[[nodiscard]] RunResult run(Mode mode, const Scenario& scenario, const RunOptions& options);

}  // namespace expcli
