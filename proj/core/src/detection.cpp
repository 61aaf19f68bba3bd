#include "covert/detection.hpp"

#include <algorithm>
#include <cmath>

#include "covert/errors.hpp"
#include "numeric.hpp"

namespace covert {

using detail::kInf;
using detail::log_kappa;

namespace {

constexpr std::size_t kThresholdGridPoints = 256;

double clamp_probability(double p) { return std::clamp(p, 0.0, 1.0); }

}  // namespace

WardenModel::WardenModel(const SchemeConfig& scheme, const SystemParams& params,
                         const DerivedConstants& constants, double h_rs_sq)
    : scheme_(scheme),
      params_(params),
      constants_(constants),
      h_rs_sq_(h_rs_sq),
      rate_control_(std::holds_alternative<RateControl>(scheme)) {
  if (!(h_rs_sq > 0.0) || !std::isfinite(h_rs_sq)) {
    throw InvalidParameter("h_rs_sq must be positive for the warden model");
  }
  validate(scheme);
  control_ = rate_control_ ? std::get<RateControl>(scheme).q : std::get<PowerControl>(scheme).p_delta;
  probs_ = opportunity_probs(scheme, params, constants.mu);

  const double phi = constants.phi;
  const double mu = constants.mu;
  const double sd = params.sigma_d_sq;
  const double p = params.p_r_max;
  const double h = h_rs_sq;
  leak_coeff_ = phi * mu * sd * h;

  breaks_.sigma_s_sq = params.sigma_s_sq;
  breaks_.rho1 = p * h * phi + params.sigma_s_sq;
  breaks_.rho2 = kInf;
  breaks_.rho3 = kInf;
  breaks_.rho4 = kInf;
  if (rate_control_) {
    covert_coeff_ = (phi * mu + 1.0) * control_ * h;
    if (mu * sd > 0.0) {
      breaks_.rho2 = p * h * (phi + (phi * mu + 1.0) * control_ / (mu * sd)) + params.sigma_s_sq;
    }
  } else {
    breaks_.rho3 = (phi * mu + 1.0) * control_ * h + params.sigma_s_sq;
    breaks_.rho4 = (p * phi + (phi * mu + 1.0) * control_) * h + params.sigma_s_sq;
  }
}

ErrorRates WardenModel::rates_from_gaps(double above_floor, double above_rho3) const {
  const double log_p_b = probs_.log_p_b;
  const double rho1_gap = params_.p_r_max * constants_.phi * h_rs_sq_;
  ErrorRates out;
  if (!(above_floor > 0.0)) {
    out.alpha = 1.0;
  } else if (above_floor >= rho1_gap) {
    out.alpha = 0.0;
  } else {
    out.alpha = clamp_probability(-std::expm1(log_kappa(leak_coeff_, above_floor) - log_p_b));
  }

  if (rate_control_) {
    if (!(above_floor > 0.0)) {
      out.beta = 0.0;
    } else if (above_floor >= breaks_.rho2 - breaks_.sigma_s_sq) {
      out.beta = 1.0;
    } else {
      out.beta = clamp_probability(
          std::exp(log_kappa(leak_coeff_ + covert_coeff_, above_floor) - log_p_b));
    }
  } else {
    if (!(above_rho3 > 0.0)) {
      out.beta = 0.0;
    } else if (above_rho3 >= rho1_gap) {
      out.beta = 1.0;
    } else {
      out.beta = clamp_probability(std::exp(log_kappa(leak_coeff_, above_rho3) - log_p_b));
    }
  }
  return out;
}

ErrorRates WardenModel::error_rates(double tau) const {
  return rates_from_gaps(tau - breaks_.sigma_s_sq, tau - breaks_.rho3);
}

double WardenModel::detection_error(double tau) const {
  const ErrorRates r = error_rates(tau);
  return (1.0 - probs_.omega) * r.alpha + probs_.omega * r.beta;
}

DetectionReport WardenModel::report_at(double tau) const {
  const ErrorRates r = error_rates(tau);
  DetectionReport rep;
  rep.tau_star = tau;
  rep.alpha = r.alpha;
  rep.beta = r.beta;
  rep.omega = probs_.omega;
  rep.xi_star = (1.0 - probs_.omega) * r.alpha + probs_.omega * r.beta;
  rep.scheme = scheme_;
  return rep;
}

DetectionReport WardenModel::optimal() const {
  return rate_control_ ? optimal_rate_control() : optimal_power_control();
}

DetectionReport WardenModel::optimal_rate_control() const {
  const double omega = probs_.omega;
  const double sigma_s = breaks_.sigma_s_sq;
  if (control_ == 0.0) {
    // Nothing to hide: both hypotheses coincide and the best test is a coin.
    return report_at(breaks_.rho1);
  }
  if (leak_coeff_ == 0.0) {
    // Without forwarding power any threshold just above the noise floor
    // catches every covert transmission and never false-alarms.
    DetectionReport rep = report_at(std::nextafter(sigma_s, kInf));
    rep.xi_star = 0.0;
    return rep;
  }

  const double phi_mu = constants_.phi * constants_.mu;
  const double a = phi_mu * params_.sigma_d_sq;
  const double b = (phi_mu + 1.0) * control_;
  const double log_a_ratio = probs_.log_omega - std::log1p(-omega) + std::log1p(b / a);

  if (log_a_ratio > 0.0) {
    const double tau_dagger = covert_coeff_ / log_a_ratio + sigma_s;
    if (tau_dagger <= breaks_.rho1) {
      DetectionReport rep = report_at(tau_dagger);
      const double log_f1 = std::log(b / (a + b));
      rep.xi_star = (1.0 - omega) *
                    -std::expm1(-probs_.log_p_b + log_f1 - (a / b) * log_a_ratio);
      rep.xi_star = clamp_probability(rep.xi_star);
      return rep;
    }
  }
  DetectionReport rep = report_at(breaks_.rho1);
  rep.xi_star = omega * std::exp(-b / (constants_.phi * params_.p_r_max));
  return rep;
}

DetectionReport WardenModel::optimal_power_control() const {
  const double bound = covert_power_bound(params_, constants_);
  if (control_ > bound) {
    DetectionReport rep = report_at(0.5 * (breaks_.rho1 + breaks_.rho3));
    rep.alpha = 0.0;
    rep.beta = 0.0;
    rep.xi_star = 0.0;
    rep.status = DetectionStatus::DetectableWithCertainty;
    return rep;
  }

  // Parametrize tau = rho3 + s (rho1 - rho3) and keep both gaps exact so that
  // nothing cancels when rho3 approaches rho1.
  const double phi_mu = constants_.phi * constants_.mu;
  const double rho3_gap = (phi_mu + 1.0) * control_ * h_rs_sq_;
  const double span = std::max(
      0.0, (params_.p_r_max * constants_.phi - (phi_mu + 1.0) * control_) * h_rs_sq_);
  const double omega = probs_.omega;
  auto xi_at = [&](double s) {
    const ErrorRates r = rates_from_gaps(rho3_gap + s * span, s * span);
    return (1.0 - omega) * r.alpha + omega * r.beta;
  };

  const detail::ScalarMin best = detail::minimize_on_interval(xi_at, 0.0, 1.0, kThresholdGridPoints);
  const ErrorRates r = rates_from_gaps(rho3_gap + best.x * span, best.x * span);
  DetectionReport rep;
  rep.tau_star = breaks_.sigma_s_sq + rho3_gap + best.x * span;
  rep.alpha = r.alpha;
  rep.beta = r.beta;
  rep.omega = omega;
  rep.xi_star = best.value;
  rep.scheme = scheme_;
  return rep;
}

double statistic_mean(const SchemeConfig& scheme, const SystemParams& params,
                      const DerivedConstants& constants, const ChannelDraw& draw,
                      Hypothesis hypothesis) {
  if (draw.h_rd_sq < forwarding_threshold(params, constants.mu)) {
    throw ForwardingOutage("relay does not forward for this draw");
  }
  if (hypothesis == Hypothesis::Null) {
    const double p_r0 = relay_forward_power(params, constants.mu, draw.h_rd_sq);
    return p_r0 * draw.h_rs_sq * constants.phi + params.sigma_s_sq;
  }
  const RelayPowers powers = relay_power_under_alt(scheme, params, constants.mu, draw.h_rd_sq);
  return powers.p_r1 * draw.h_rs_sq * constants.phi + powers.p_delta_effective * draw.h_rs_sq +
         params.sigma_s_sq;
}

ErrorRates error_rates(const SchemeConfig& scheme, const SystemParams& params,
                       const DerivedConstants& constants, double h_rs_sq, double tau) {
  return WardenModel(scheme, params, constants, h_rs_sq).error_rates(tau);
}

double detection_error_prob(const SchemeConfig& scheme, const SystemParams& params,
                            const DerivedConstants& constants, double h_rs_sq, double tau) {
  return WardenModel(scheme, params, constants, h_rs_sq).detection_error(tau);
}

DetectionReport optimal_threshold(const SchemeConfig& scheme, const SystemParams& params,
                                  const DerivedConstants& constants, double h_rs_sq) {
  return WardenModel(scheme, params, constants, h_rs_sq).optimal();
}

double covert_power_bound(const SystemParams& params, const DerivedConstants& constants) {
  return constants.phi * params.p_r_max / (constants.phi * constants.mu + 1.0);
}

}  // namespace covert
