#pragma once

#include "covert/scenario.hpp"

namespace covert::testing {

// P_s = 10, unit noise everywhere, unit gains, R_sd = 1, P_r^max = 10.
inline SystemParams baseline() { return SystemParams{}; }

inline DerivedConstants baseline_constants() { return derive_constants(baseline(), 1.0); }

inline constexpr double kBaselineMu = 33.0 / 7.0;

}  // namespace covert::testing
