#include "covert/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "covert/covert_rate.hpp"
#include "covert/detection.hpp"
#include "covert/errors.hpp"
#include "covert/parallel.hpp"
#include "covert/philox.hpp"

namespace covert {
namespace {

constexpr std::uint64_t kMinTrials = 1000;

struct Tally {
  std::uint64_t trials = 0;
  std::uint64_t forwarding = 0;
  std::uint64_t covert = 0;
  std::uint64_t null_draws = 0;
  std::uint64_t false_alarms = 0;
  std::uint64_t alt_draws = 0;
  std::uint64_t misses = 0;
  std::uint64_t covert_sent = 0;
  double rate_sum = 0.0;
  double rate_sq_sum = 0.0;

  Tally& operator+=(const Tally& o) {
    trials += o.trials;
    forwarding += o.forwarding;
    covert += o.covert;
    null_draws += o.null_draws;
    false_alarms += o.false_alarms;
    alt_draws += o.alt_draws;
    misses += o.misses;
    covert_sent += o.covert_sent;
    rate_sum += o.rate_sum;
    rate_sq_sum += o.rate_sq_sum;
    return *this;
  }
};

Estimate binomial(std::uint64_t hits, std::uint64_t n) {
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n))};
}

// Powers of a relay that sends the covert message, whether or not the draw
// leaves it enough budget.
RelayPowers covert_active_powers(const SchemeConfig& scheme, const SystemParams& params,
                                 double mu, double h_rd_sq) {
  if (const auto* rc = std::get_if<RateControl>(&scheme)) {
    return {mu * (rc->q + params.sigma_d_sq) / h_rd_sq, rc->q / h_rd_sq, true};
  }
  const double p_delta = std::get<PowerControl>(scheme).p_delta;
  return {mu * p_delta + mu * params.sigma_d_sq / h_rd_sq, p_delta, true};
}

class TrialRunner {
 public:
  TrialRunner(const SystemParams& params, const SourceLink& link, const SimConfig& sim,
              std::optional<double> tau)
      : params_(params),
        link_(link),
        sim_(sim),
        tau_(tau),
        constants_(derive_constants(params, link.h_sr_sq)),
        forward_at_(forwarding_threshold(params, constants_.mu)),
        covert_at_(covert_threshold(sim.scheme, params, constants_.mu)) {}

  Tally run() const {
    const std::uint64_t blocks = (sim_.n_trials + kTrialBlock - 1) / kTrialBlock;
    std::vector<Tally> partial(blocks);
    parallel_for(blocks, sim_.threads, [&](std::size_t b) {
      const std::uint64_t begin = b * kTrialBlock;
      const std::uint64_t end = std::min<std::uint64_t>(sim_.n_trials, begin + kTrialBlock);
      for (std::uint64_t t = begin; t < end; ++t) trial(t, partial[b]);
    });
    Tally total;
    for (const Tally& t : partial) total += t;
    return total;
  }

 private:
  void trial(std::uint64_t t, Tally& tally) const {
    ++tally.trials;
    TrialStream channel(sim_.seed, t, static_cast<std::uint32_t>(Substream::RelayChannel));
    const double h_rd = channel.exponential();
    if (!(h_rd >= forward_at_ && h_rd > 0.0)) return;
    ++tally.forwarding;
    const bool covert_ok = h_rd >= covert_at_;
    if (covert_ok) ++tally.covert;

    if (tau_) {
      TrialStream hypothesis(sim_.seed, t, static_cast<std::uint32_t>(Substream::Hypothesis));
      const double leak = link_.h_rs_sq * constants_.phi;
      if (hypothesis.coin()) {
        ++tally.alt_draws;
        if (covert_ok) ++tally.covert_sent;
        const RelayPowers p = covert_active_powers(sim_.scheme, params_, constants_.mu, h_rd);
        const double stat =
            p.p_r1 * leak + p.p_delta_effective * link_.h_rs_sq + params_.sigma_s_sq;
        if (stat < *tau_) ++tally.misses;
      } else {
        ++tally.null_draws;
        const double stat =
            constants_.mu * params_.sigma_d_sq / h_rd * leak + params_.sigma_s_sq;
        if (stat > *tau_) ++tally.false_alarms;
      }
    } else if (covert_ok) {
      const ChannelDraw draw{link_.h_sr_sq, h_rd, link_.h_rs_sq};
      const double rate =
          std::log1p(covert_sinr(sim_.scheme, params_, constants_, draw)) / std::numbers::ln2;
      tally.rate_sum += rate;
      tally.rate_sq_sum += rate * rate;
    }
  }

  SystemParams params_;
  SourceLink link_;
  SimConfig sim_;
  std::optional<double> tau_;
  DerivedConstants constants_;
  double forward_at_;
  double covert_at_;
};

void check_config(const SystemParams& params, const SimConfig& sim) {
  params.validate();
  validate(sim.scheme);
  if (sim.n_trials < kMinTrials) {
    throw InvalidParameter("n_trials must be at least " + std::to_string(kMinTrials));
  }
}

EmpiricalReport base_report(const Tally& t) {
  if (t.forwarding < kMinForwardingDraws) {
    throw DegenerateSample("only " + std::to_string(t.forwarding) +
                           " draws met the forwarding condition");
  }
  EmpiricalReport r;
  r.n_trials = t.trials;
  r.n_forwarding = t.forwarding;
  r.n_covert = t.covert;
  r.p_b = binomial(t.forwarding, t.trials);
  r.p_c = binomial(t.covert, t.trials);
  return r;
}

}  // namespace

EmpiricalReport simulate_detection(const SystemParams& params, const SourceLink& link,
                                   const SimConfig& sim) {
  check_config(params, sim);
  double tau = 0.0;
  if (sim.tau) {
    tau = *sim.tau;
  } else {
    const DerivedConstants k = derive_constants(params, link.h_sr_sq);
    tau = optimal_threshold(sim.scheme, params, k, link.h_rs_sq).tau_star;
  }
  const Tally t = TrialRunner(params, link, sim, tau).run();
  EmpiricalReport r = base_report(t);
  r.tau = tau;
  const Estimate omega = binomial(t.covert_sent, t.forwarding);
  r.omega = omega;
  if (t.null_draws > 0) r.alpha = binomial(t.false_alarms, t.null_draws);
  if (t.alt_draws > 0) r.beta = binomial(t.misses, t.alt_draws);
  if (r.alpha && r.beta) {
    const double a = r.alpha->value;
    const double b = r.beta->value;
    const double w = omega.value;
    const double var = std::pow((1.0 - w) * r.alpha->std_err, 2) +
                       std::pow(w * r.beta->std_err, 2) + std::pow((b - a) * omega.std_err, 2);
    r.xi = Estimate{(1.0 - w) * a + w * b, std::sqrt(var)};
  }
  return r;
}

EmpiricalReport simulate_effective_rate(const SystemParams& params, const SourceLink& link,
                                        const SimConfig& sim) {
  check_config(params, sim);
  const Tally t = TrialRunner(params, link, sim, std::nullopt).run();
  EmpiricalReport r = base_report(t);
  const double n = static_cast<double>(t.trials);
  const double mean = t.rate_sum / n;
  const double var = std::max(0.0, t.rate_sq_sum / n - mean * mean);
  r.r_c = Estimate{mean, std::sqrt(var / n)};
  return r;
}

double quadrature_rate_oracle(const SystemParams& params, const DerivedConstants& constants,
                              double p_delta) {
  if (p_delta == 0.0) return 0.0;
  const PowerRateCoefficients c = power_rate_coefficients(params, constants, p_delta);
  auto integrand = [&](double x) {
    return std::log((c.beta1 + c.alpha1 * x) / (c.beta2 + c.alpha2 * x)) * std::exp(-x);
  };
  double error = 0.0;
  const double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, 0.0, std::numeric_limits<double>::infinity(), 15, 1e-12, &error);
  if (!(error <= 1e-10)) {
    throw ConvergenceFailure("rate integral error estimate " + std::to_string(error));
  }
  return c.p_c * integral / std::numbers::ln2;
}

}  // namespace covert
