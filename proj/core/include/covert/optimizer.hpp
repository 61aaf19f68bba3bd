#pragma once

// Covertness-constrained maximization of the effective covert rate over the
// scheme's control variable (q for rate control, p_delta for power control):
//
//   maximize R_c   subject to   xi* >= omega - epsilon.
//
// The constraint also holds trivially once omega <= epsilon, i.e. when the
// relay almost never dares to transmit and is caught whenever it does. The
// search therefore keeps to the feasible range that starts at a vanishing
// control value and stops at the first violation.

#include <cstddef>

#include "covert/detection.hpp"
#include "covert/scenario.hpp"

namespace covert {

enum class OptimizationStatus { Optimal, NoFeasiblePoint };

struct OptimizationResult {
  double control_star = 0.0;  // q* or p_delta*
  double r_c_star = 0.0;
  DetectionReport report;
  OptimizationStatus status = OptimizationStatus::NoFeasiblePoint;
};

struct SearchGrid {
  std::size_t points = 512;
  double q_min = 1e-4;  // in units of sigma_d^2
  double q_max = 1e2;
  double p_delta_margin = 1e-6;  // grid stops at (1 - margin) of the power bound
};

/// Throws InfeasibleRate when the source-relay link cannot carry R_sd.
[[nodiscard]] OptimizationResult maximize_rate_control(const SystemParams& params,
                                                       const SourceLink& link,
                                                       const SearchGrid& grid = {});

[[nodiscard]] OptimizationResult maximize_power_control(const SystemParams& params,
                                                        const SourceLink& link,
                                                        const SearchGrid& grid = {});

/// Constraint slack xi* - (omega - epsilon) for a given report.
[[nodiscard]] double covertness_slack(const DetectionReport& report, double epsilon);

/// Rate-control xi* as P_r^max grows without bound.
[[nodiscard]] double xi_limit(const SystemParams& params, const DerivedConstants& constants,
                              double q);

/// Approximate largest q meeting the covertness constraint at large
/// P_r^max. Throws DomainError for epsilon >= 1/2.
[[nodiscard]] double q_epsilon(const SystemParams& params, const DerivedConstants& constants);

struct Asymptotics {
  double xi_limit = 0.0;
  double q_epsilon = 0.0;
};

[[nodiscard]] Asymptotics asymptotics(const SystemParams& params,
                                      const DerivedConstants& constants, double q);

}  // namespace covert
