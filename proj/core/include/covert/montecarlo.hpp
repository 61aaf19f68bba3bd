#pragma once

// Monte Carlo replay of the relay policy and the warden's radiometer. The
// source link is held fixed and |h_rd|^2 is drawn per trial.

#include <cstdint>
#include <optional>

#include "covert/scenario.hpp"

namespace covert {

struct SimConfig {
  std::uint64_t n_trials = 1'000'000;
  std::uint64_t seed = 1;
  SchemeConfig scheme = RateControl{};
  std::optional<double> tau;  // defaults to the optimal threshold
  unsigned threads = 0;       // 0: hardware concurrency
};

struct Estimate {
  double value = 0.0;
  double std_err = 0.0;
};

struct EmpiricalReport {
  std::uint64_t n_trials = 0;
  std::uint64_t n_forwarding = 0;  // draws meeting the forwarding condition
  std::uint64_t n_covert = 0;      // draws meeting the covert condition
  Estimate p_b;
  Estimate p_c;
  std::optional<double> tau;
  std::optional<Estimate> alpha;
  std::optional<Estimate> beta;
  std::optional<Estimate> xi;
  std::optional<Estimate> omega;
  std::optional<Estimate> r_c;
};

/// Minimum number of forwarding draws before estimates are reported.
inline constexpr std::uint64_t kMinForwardingDraws = 100;

/// Every forwarding draw gets a fair coin choosing the hypothesis. H0 uses
/// the plain forwarding statistic, H1 the statistic of a relay transmitting
/// its covert message with the covert-active power split, so alpha and beta
/// are conditioned on forwarding alone. omega is estimated as the fraction of
/// forwarding draws with both the covert condition and heads.
/// Throws DegenerateSample when fewer than 100 draws forward.
[[nodiscard]] EmpiricalReport simulate_detection(const SystemParams& params,
                                                 const SourceLink& link, const SimConfig& sim);

/// Mean of log2(1 + SINR) over draws where the covert message goes out,
/// zero elsewhere.
[[nodiscard]] EmpiricalReport simulate_effective_rate(const SystemParams& params,
                                                      const SourceLink& link,
                                                      const SimConfig& sim);

/// Power-control effective covert rate by adaptive Gauss-Kronrod
/// integration. Throws ConvergenceFailure when the error estimate stays
/// above 1e-10.
[[nodiscard]] double quadrature_rate_oracle(const SystemParams& params,
                                            const DerivedConstants& constants, double p_delta);

/// Trials per reduction block. Blocks are summed in index order.
inline constexpr std::uint64_t kTrialBlock = 8192;

/// Substream ids within one trial.
enum class Substream : std::uint32_t { RelayChannel = 0, Hypothesis = 1, SourceChannel = 2 };

}  // namespace covert
