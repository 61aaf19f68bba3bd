#pragma once

#include <optional>

#include "covert/scenario.hpp"

namespace covert {

/// Exponential integral Ei(x) for x < 0. Throws DomainError otherwise.
[[nodiscard]] double exp_integral(double x);

/// e^z E1(z) = -e^z Ei(-z) for z > 0, finite where e^z alone would overflow.
[[nodiscard]] double scaled_exp_integral_e1(double z);

struct RateReport {
  std::optional<double> gamma_delta;  // constant covert SINR (rate control)
  std::optional<double> r_delta;      // covert rate when active (rate control)
  double p_c = 0.0;
  double r_c = 0.0;  // effective covert rate, bits per channel use
};

/// SINR of the covert message at the destination for one draw, assuming the
/// relay transmits it.
[[nodiscard]] double covert_sinr(const SchemeConfig& scheme, const SystemParams& params,
                                 const DerivedConstants& constants, const ChannelDraw& draw);

/// Effective covert rate averaged over |h_rd|^2. Throws PowerBudgetExceeded
/// for power control with (mu + 1) P_delta >= P_r^max.
[[nodiscard]] RateReport effective_rate(const SchemeConfig& scheme, const SystemParams& params,
                                        const DerivedConstants& constants);

/// The four coefficients of the power-control rate integral
///   R_c = P_C / ln 2 * integral_0^inf ln((b1 + a1 x) / (b2 + a2 x)) e^{-x} dx.
struct PowerRateCoefficients {
  double beta1 = 0.0;
  double beta2 = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double p_c = 0.0;
};

[[nodiscard]] PowerRateCoefficients power_rate_coefficients(const SystemParams& params,
                                                            const DerivedConstants& constants,
                                                            double p_delta);

}  // namespace covert
