#pragma once

// The source acts as warden: it runs a radiometer on the relay's signal and
// compares the (asymptotic) average received power with a threshold tau.

#include "covert/scenario.hpp"

namespace covert {

/// Thresholds at which the false-alarm / miss-detection branches switch.
/// rho2 belongs to rate control, rho3 and rho4 to power control; the unused
/// pair is left at +inf.
struct ThresholdBreakpoints {
  double sigma_s_sq = 0.0;
  double rho1 = 0.0;
  double rho2 = 0.0;
  double rho3 = 0.0;
  double rho4 = 0.0;
};

struct ErrorRates {
  double alpha = 0.0;  // false alarm
  double beta = 0.0;   // miss detection
};

enum class DetectionStatus {
  Ok,
  /// Power control above the covert power bound: a threshold between rho1
  /// and rho3 separates the hypotheses perfectly.
  DetectableWithCertainty,
};

struct DetectionReport {
  double tau_star = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double xi_star = 0.0;
  double omega = 0.0;
  SchemeConfig scheme;
  DetectionStatus status = DetectionStatus::Ok;
};

/// Everything the warden knows for one scheme and one source link, with the
/// per-threshold work reduced to a couple of exponentials.
class WardenModel {
 public:
  /// Throws InvalidParameter for h_rs_sq <= 0 and PowerBudgetExceeded for
  /// power control with (mu + 1) P_delta >= P_r^max.
  WardenModel(const SchemeConfig& scheme, const SystemParams& params,
              const DerivedConstants& constants, double h_rs_sq);

  [[nodiscard]] const ThresholdBreakpoints& breakpoints() const { return breaks_; }
  [[nodiscard]] const OpportunityProbs& probs() const { return probs_; }
  [[nodiscard]] bool is_rate_control() const { return rate_control_; }

  [[nodiscard]] ErrorRates error_rates(double tau) const;
  [[nodiscard]] double detection_error(double tau) const;
  [[nodiscard]] DetectionReport optimal() const;

 private:
  ErrorRates rates_from_gaps(double above_floor, double above_rho3) const;
  DetectionReport optimal_rate_control() const;
  DetectionReport optimal_power_control() const;
  DetectionReport report_at(double tau) const;

  SchemeConfig scheme_;
  SystemParams params_;
  DerivedConstants constants_;
  double h_rs_sq_;
  bool rate_control_;
  double control_ = 0.0;  // q or p_delta
  OpportunityProbs probs_;
  ThresholdBreakpoints breaks_;
  double leak_coeff_ = 0.0;    // phi mu sigma_d^2 h_rs
  double covert_coeff_ = 0.0;  // (phi mu + 1) q h_rs, rate control only
};

/// Asymptotic radiometer statistic. Throws ForwardingOutage when the draw
/// violates the forwarding condition.
[[nodiscard]] double statistic_mean(const SchemeConfig& scheme, const SystemParams& params,
                                    const DerivedConstants& constants, const ChannelDraw& draw,
                                    Hypothesis hypothesis);

[[nodiscard]] ErrorRates error_rates(const SchemeConfig& scheme, const SystemParams& params,
                                     const DerivedConstants& constants, double h_rs_sq,
                                     double tau);

/// xi(tau) = (1 - omega) alpha + omega beta.
[[nodiscard]] double detection_error_prob(const SchemeConfig& scheme, const SystemParams& params,
                                          const DerivedConstants& constants, double h_rs_sq,
                                          double tau);

/// Threshold minimizing xi and the resulting minimum. Rate control is closed
/// form; power control is a bounded scalar search on [rho3, rho1].
[[nodiscard]] DetectionReport optimal_threshold(const SchemeConfig& scheme,
                                                const SystemParams& params,
                                                const DerivedConstants& constants,
                                                double h_rs_sq);

/// Largest power-control P_delta the warden cannot separate perfectly:
/// phi P_r^max / (phi mu + 1).
[[nodiscard]] double covert_power_bound(const SystemParams& params,
                                        const DerivedConstants& constants);

}  // namespace covert
