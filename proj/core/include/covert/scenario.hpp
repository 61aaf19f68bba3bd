#pragma once

// Domain types for a one-way amplify-and-forward relay network in which the
// relay may hide its own (covert) message under the forwarded signal, plus the
// relay power policies and the opportunity probabilities that follow from
// unit-mean exponential |h_rd|^2.
//
// Every quantity here is linear. dB only appears at the CLI boundary.

#include <variant>

namespace covert {

struct SystemParams {
  double p_s = 10.0;          // source transmit power
  double p_r_max = 10.0;      // relay maximum total transmit power
  double sigma_r_sq = 1.0;    // relay noise variance
  double sigma_d_sq = 1.0;    // destination noise variance
  double sigma_s_sq = 1.0;    // source (warden) noise variance
  double r_sd = 1.0;          // source->destination rate, bits per channel use
  double epsilon = 0.1;       // covertness slack

  /// Throws InvalidParameter unless powers/variances > 0, r_sd >= 0 and
  /// epsilon in [0, 1].
  void validate() const;

  bool operator==(const SystemParams&) const = default;
};

/// One realization of the squared channel gains.
struct ChannelDraw {
  double h_sr_sq = 1.0;
  double h_rd_sq = 1.0;
  double h_rs_sq = 1.0;

  /// Reciprocal draw: h_rs = h_sr.
  static ChannelDraw reciprocal(double h_sr_sq, double h_rd_sq) {
    return {h_sr_sq, h_rd_sq, h_sr_sq};
  }
  void validate() const;
};

/// The gains the source knows: its link to the relay and the relay's link
/// back to it. |h_rd|^2 stays random.
struct SourceLink {
  double h_sr_sq = 1.0;
  double h_rs_sq = 1.0;

  static SourceLink reciprocal(double h_sr_sq) { return {h_sr_sq, h_sr_sq}; }
};

/// Rate control: the relay scales P_delta with the channel so that the
/// received covert power P_delta * |h_rd|^2 stays at q.
struct RateControl {
  double q = 0.1;
};

/// Power control: the relay transmits the covert message at fixed power.
struct PowerControl {
  double p_delta = 0.1;
};

using SchemeConfig = std::variant<RateControl, PowerControl>;

void validate(const SchemeConfig& scheme);

/// Quantities fixed by the parameters and |h_sr|^2.
struct DerivedConstants {
  double mu = 0.0;       // relay power factor that holds C_sd = R_sd
  double phi = 0.0;      // sigma_r^2 / (P_s |h_sr|^2 + sigma_r^2)
  double eta = 0.0;      // P_s / sigma_r^2
  double h_sr_sq = 0.0;

  /// eta * |h_sr|^2, the first-hop SNR.
  [[nodiscard]] double first_hop_snr() const { return eta * h_sr_sq; }
};

enum class Hypothesis { Null, Alternative };

[[nodiscard]] double db_to_linear(double db);
[[nodiscard]] double linear_to_db(double linear);

/// mu = (P_s h + sigma_r^2)(2^{2R} - 1) / (P_s h - sigma_r^2 (2^{2R} - 1)).
/// Throws InfeasibleRate when the denominator is not positive.
[[nodiscard]] double compute_mu(const SystemParams& params, double h_sr_sq);

/// mu, phi and eta for the given source-relay gain. Throws InfeasibleRate.
[[nodiscard]] DerivedConstants derive_constants(const SystemParams& params, double h_sr_sq);

/// Smallest |h_rd|^2 at which the relay forwards (condition B).
[[nodiscard]] double forwarding_threshold(const SystemParams& params, double mu);

/// Smallest |h_rd|^2 at which the relay can add the covert message
/// (condition C). Throws PowerBudgetExceeded for power control with
/// (mu + 1) P_delta >= P_r^max.
[[nodiscard]] double covert_threshold(const SchemeConfig& scheme, const SystemParams& params,
                                      double mu);

/// Relay forwarding power with no covert message: mu sigma_d^2 / |h_rd|^2
/// when condition B holds, else 0.
[[nodiscard]] double relay_forward_power(const SystemParams& params, double mu, double h_rd_sq);

struct RelayPowers {
  double p_r1 = 0.0;               // power spent forwarding x_b
  double p_delta_effective = 0.0;  // power spent on the covert message
  bool covert_active = false;
};

/// Relay powers when it intends to transmit the covert message. Falls back to
/// plain forwarding when condition C fails and to silence when B fails.
[[nodiscard]] RelayPowers relay_power_under_alt(const SchemeConfig& scheme,
                                                const SystemParams& params, double mu,
                                                double h_rd_sq);

struct OpportunityProbs {
  double p_b = 1.0;
  double p_c = 1.0;
  double omega = 0.5;  // prior of H1 given B: p_c / (2 p_b)
  double log_p_b = 0.0;
  double log_p_c = 0.0;
  double log_omega = 0.0;
};

[[nodiscard]] OpportunityProbs opportunity_probs(const SchemeConfig& scheme,
                                                 const SystemParams& params, double mu);

}  // namespace covert
