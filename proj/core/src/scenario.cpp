#include "covert/scenario.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "covert/errors.hpp"
#include "numeric.hpp"

namespace covert {

using detail::Overloaded;

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw InvalidParameter(std::string(name) + " must be positive and finite, got " +
                           std::to_string(value));
  }
}

}  // namespace

void SystemParams::validate() const {
  require_positive(p_s, "p_s");
  require_positive(p_r_max, "p_r_max");
  require_positive(sigma_r_sq, "sigma_r_sq");
  require_positive(sigma_d_sq, "sigma_d_sq");
  require_positive(sigma_s_sq, "sigma_s_sq");
  if (!(r_sd >= 0.0) || !std::isfinite(r_sd)) {
    throw InvalidParameter("r_sd must be non-negative, got " + std::to_string(r_sd));
  }
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw InvalidParameter("epsilon must lie in [0, 1], got " + std::to_string(epsilon));
  }
}

void ChannelDraw::validate() const {
  if (!(h_sr_sq >= 0.0) || !(h_rd_sq >= 0.0) || !(h_rs_sq >= 0.0)) {
    throw InvalidParameter("channel gains must be non-negative");
  }
}

void validate(const SchemeConfig& scheme) {
  std::visit(Overloaded{
                 [](const RateControl& rc) {
                   if (!(rc.q >= 0.0) || !std::isfinite(rc.q)) {
                     throw InvalidParameter("q must be non-negative");
                   }
                 },
                 [](const PowerControl& pc) {
                   if (!(pc.p_delta >= 0.0) || !std::isfinite(pc.p_delta)) {
                     throw InvalidParameter("p_delta must be non-negative");
                   }
                 },
             },
             scheme);
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

double compute_mu(const SystemParams& params, double h_sr_sq) {
  // 2^{2R} - 1 without losing digits for small R.
  const double snr_req = std::expm1(2.0 * params.r_sd * std::numbers::ln2);
  const double received = params.p_s * h_sr_sq;
  const double denominator = received - params.sigma_r_sq * snr_req;
  if (!(denominator > 0.0)) {
    throw InfeasibleRate("source-relay link cannot support R_sd = " +
                         std::to_string(params.r_sd));
  }
  return (received + params.sigma_r_sq) * snr_req / denominator;
}

DerivedConstants derive_constants(const SystemParams& params, double h_sr_sq) {
  DerivedConstants k;
  k.mu = compute_mu(params, h_sr_sq);
  k.phi = params.sigma_r_sq / (params.p_s * h_sr_sq + params.sigma_r_sq);
  k.eta = params.p_s / params.sigma_r_sq;
  k.h_sr_sq = h_sr_sq;
  return k;
}

double forwarding_threshold(const SystemParams& params, double mu) {
  return mu * params.sigma_d_sq / params.p_r_max;
}

double covert_threshold(const SchemeConfig& scheme, const SystemParams& params, double mu) {
  return std::visit(
      Overloaded{
          [&](const RateControl& rc) {
            return (mu * params.sigma_d_sq + mu * rc.q + rc.q) / params.p_r_max;
          },
          [&](const PowerControl& pc) {
            const double headroom = params.p_r_max - (mu + 1.0) * pc.p_delta;
            if (!(headroom > 0.0)) {
              throw PowerBudgetExceeded("(mu + 1) * p_delta must stay below p_r_max");
            }
            return mu * params.sigma_d_sq / headroom;
          },
      },
      scheme);
}

double relay_forward_power(const SystemParams& params, double mu, double h_rd_sq) {
  if (h_rd_sq >= forwarding_threshold(params, mu) && h_rd_sq > 0.0) {
    return mu * params.sigma_d_sq / h_rd_sq;
  }
  return 0.0;
}

RelayPowers relay_power_under_alt(const SchemeConfig& scheme, const SystemParams& params,
                                  double mu, double h_rd_sq) {
  const double c_threshold = covert_threshold(scheme, params, mu);
  if (h_rd_sq >= c_threshold && h_rd_sq > 0.0) {
    return std::visit(Overloaded{
                          [&](const RateControl& rc) {
                            return RelayPowers{mu * (rc.q + params.sigma_d_sq) / h_rd_sq,
                                               rc.q / h_rd_sq, true};
                          },
                          [&](const PowerControl& pc) {
                            return RelayPowers{
                                mu * pc.p_delta + mu * params.sigma_d_sq / h_rd_sq,
                                pc.p_delta, true};
                          },
                      },
                      scheme);
  }
  return RelayPowers{relay_forward_power(params, mu, h_rd_sq), 0.0, false};
}

OpportunityProbs opportunity_probs(const SchemeConfig& scheme, const SystemParams& params,
                                   double mu) {
  OpportunityProbs out;
  out.log_p_b = -forwarding_threshold(params, mu);
  out.log_p_c = -covert_threshold(scheme, params, mu);
  // log omega = log(1/2) + log P_C - log P_B, written in the closed forms so
  // that nothing cancels when both exponents are large.
  const double log_ratio = std::visit(
      Overloaded{
          [&](const RateControl& rc) { return -(mu + 1.0) * rc.q / params.p_r_max; },
          [&](const PowerControl& pc) {
            const double headroom = params.p_r_max - (mu + 1.0) * pc.p_delta;
            return -mu * (mu + 1.0) * params.sigma_d_sq * pc.p_delta /
                   (params.p_r_max * headroom);
          },
      },
      scheme);
  out.log_omega = -std::numbers::ln2 + log_ratio;
  out.p_b = std::exp(out.log_p_b);
  out.p_c = std::exp(out.log_p_c);
  out.omega = std::exp(out.log_omega);
  return out;
}

}  // namespace covert
