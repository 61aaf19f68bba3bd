#include "covert/covert_rate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "covert/errors.hpp"
#include "numeric.hpp"

namespace covert {

using detail::Overloaded;

double covert_sinr(const SchemeConfig& scheme, const SystemParams& params,
                   const DerivedConstants& constants, const ChannelDraw& draw) {
  const double mu = constants.mu;
  const double sd = params.sigma_d_sq;
  const double hop = constants.first_hop_snr();
  return std::visit(
      Overloaded{
          [&](const RateControl& rc) { return rc.q / (mu * (rc.q + sd) / (hop + 1.0) + sd); },
          [&](const PowerControl& pc) {
            return pc.p_delta * (hop + 1.0) * draw.h_rd_sq /
                   (mu * pc.p_delta * draw.h_rd_sq + (hop + mu + 1.0) * sd);
          },
      },
      scheme);
}

PowerRateCoefficients power_rate_coefficients(const SystemParams& params,
                                              const DerivedConstants& constants, double p_delta) {
  const double mu = constants.mu;
  const double sd = params.sigma_d_sq;
  const double k = constants.first_hop_snr() + mu + 1.0;
  const double headroom = params.p_r_max - (mu + 1.0) * p_delta;
  if (!(headroom > 0.0)) {
    throw PowerBudgetExceeded("(mu + 1) * p_delta must stay below p_r_max");
  }
  PowerRateCoefficients c;
  c.beta1 = k * (params.p_r_max - p_delta) * sd;
  c.beta2 = (k * headroom + mu * mu * p_delta) * sd;
  c.alpha1 = p_delta * k * headroom;
  c.alpha2 = mu * p_delta * headroom;
  c.p_c = std::exp(-mu * sd / headroom);
  return c;
}

RateReport effective_rate(const SchemeConfig& scheme, const SystemParams& params,
                          const DerivedConstants& constants) {
  validate(scheme);
  const OpportunityProbs probs = opportunity_probs(scheme, params, constants.mu);
  RateReport report;
  report.p_c = probs.p_c;

  if (std::holds_alternative<RateControl>(scheme)) {
    const double gamma = covert_sinr(scheme, params, constants, ChannelDraw{});
    report.gamma_delta = gamma;
    report.r_delta = std::log1p(gamma) / std::numbers::ln2;
    report.r_c = *report.r_delta * probs.p_c;
    return report;
  }

  const double p_delta = std::get<PowerControl>(scheme).p_delta;
  if (p_delta == 0.0) return report;
  const PowerRateCoefficients c = power_rate_coefficients(params, constants, p_delta);
  const double hop1 = constants.first_hop_snr() + 1.0;
  // beta1 - beta2 in closed form keeps the logarithm accurate when the two
  // are close.
  const double beta_diff = constants.mu * p_delta * hop1 * params.sigma_d_sq;
  double integral = std::log1p(beta_diff / c.beta2);
  integral += scaled_exp_integral_e1(c.beta1 / c.alpha1);
  if (c.alpha2 > 0.0) integral -= scaled_exp_integral_e1(c.beta2 / c.alpha2);
  report.r_c = std::max(0.0, c.p_c * integral / std::numbers::ln2);
  return report;
}

}  // namespace covert
