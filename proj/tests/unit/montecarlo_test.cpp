#include <gtest/gtest.h>

#include <cmath>

#include "covert/covert_rate.hpp"
#include "covert/detection.hpp"
#include "covert/errors.hpp"
#include "covert/montecarlo.hpp"
#include "fixtures.hpp"

namespace covert {
namespace {

using testing::baseline;
using testing::baseline_constants;

constexpr double kSigmas = 3.0;

void expect_within(const Estimate& e, double truth, const char* what) {
  EXPECT_LE(std::abs(e.value - truth), kSigmas * e.std_err + 1e-12)
      << what << ": " << e.value << " vs " << truth << " (se " << e.std_err << ")";
}

TEST(SimulateDetection, ThresholdBelowNoiseFloor) {
  SimConfig sim;
  sim.n_trials = 20000;
  sim.tau = 0.5;
  const EmpiricalReport r = simulate_detection(baseline(), SourceLink::reciprocal(1.0), sim);
  ASSERT_TRUE(r.alpha && r.beta);
  EXPECT_EQ(r.alpha->value, 1.0);
  EXPECT_EQ(r.beta->value, 0.0);
}

TEST(SimulateDetection, MatchesClosedFormsForBothSchemes) {
  const SystemParams p = baseline();
  const DerivedConstants k = baseline_constants();
  for (const SchemeConfig& s : {SchemeConfig{RateControl{0.1}}, SchemeConfig{PowerControl{0.1}}}) {
    const DetectionReport d = optimal_threshold(s, p, k, 1.0);
    const OpportunityProbs o = opportunity_probs(s, p, k.mu);
    SimConfig sim;
    sim.n_trials = 1'000'000;
    sim.seed = 99;
    sim.scheme = s;
    const EmpiricalReport r = simulate_detection(p, SourceLink::reciprocal(1.0), sim);
    ASSERT_TRUE(r.alpha && r.beta && r.xi && r.omega);
    EXPECT_DOUBLE_EQ(*r.tau, d.tau_star);
    expect_within(*r.alpha, d.alpha, "alpha");
    expect_within(*r.beta, d.beta, "beta");
    expect_within(*r.omega, o.omega, "omega");
    expect_within(*r.xi, d.xi_star, "xi");
    expect_within(r.p_b, o.p_b, "p_b");
    expect_within(r.p_c, o.p_c, "p_c");
  }
}

TEST(SimulateEffectiveRate, MatchesClosedForms) {
  const SystemParams p = baseline();
  const DerivedConstants k = baseline_constants();
  for (const SchemeConfig& s : {SchemeConfig{RateControl{0.1}}, SchemeConfig{PowerControl{0.1}}}) {
    SimConfig sim;
    sim.seed = 5;
    sim.scheme = s;
    const EmpiricalReport r = simulate_effective_rate(p, SourceLink::reciprocal(1.0), sim);
    ASSERT_TRUE(r.r_c);
    expect_within(*r.r_c, effective_rate(s, p, k).r_c, "r_c");
  }
}

TEST(SimulateEffectiveRate, NoCovertPowerNoRate) {
  SimConfig sim;
  sim.n_trials = 10000;
  sim.scheme = RateControl{0.0};
  const EmpiricalReport r = simulate_effective_rate(baseline(), SourceLink::reciprocal(1.0), sim);
  EXPECT_EQ(r.r_c->value, 0.0);
}

TEST(SimulateDetection, ForwardingFractionsConverge) {
  SystemParams p = baseline();
  p.p_r_max = 3.0;
  const DerivedConstants k = derive_constants(p, 1.0);
  SimConfig sim;
  sim.seed = 2024;
  sim.scheme = RateControl{0.3};
  const EmpiricalReport r = simulate_effective_rate(p, SourceLink::reciprocal(1.0), sim);
  const OpportunityProbs o = opportunity_probs(sim.scheme, p, k.mu);
  expect_within(r.p_b, o.p_b, "p_b");
  expect_within(r.p_c, o.p_c, "p_c");
}

TEST(SimulateDetection, IdenticalForAnyThreadCount) {
  SimConfig sim;
  sim.n_trials = 300'001;
  sim.seed = 0xDEADBEEFCAFEull;
  sim.scheme = PowerControl{0.2};
  sim.threads = 1;
  const EmpiricalReport one = simulate_detection(baseline(), SourceLink::reciprocal(1.0), sim);
  const EmpiricalReport rate_one =
      simulate_effective_rate(baseline(), SourceLink::reciprocal(1.0), sim);
  for (unsigned threads : {2u, 3u, 8u}) {
    sim.threads = threads;
    const EmpiricalReport many = simulate_detection(baseline(), SourceLink::reciprocal(1.0), sim);
    EXPECT_EQ(one.alpha->value, many.alpha->value);
    EXPECT_EQ(one.beta->value, many.beta->value);
    EXPECT_EQ(one.xi->value, many.xi->value);
    EXPECT_EQ(one.n_forwarding, many.n_forwarding);
    const EmpiricalReport rate_many =
        simulate_effective_rate(baseline(), SourceLink::reciprocal(1.0), sim);
    EXPECT_EQ(rate_one.r_c->value, rate_many.r_c->value);
    EXPECT_EQ(rate_one.r_c->std_err, rate_many.r_c->std_err);
  }
}

TEST(SimulateDetection, SeedChangesSample) {
  SimConfig sim;
  sim.n_trials = 10000;
  const auto a = simulate_detection(baseline(), SourceLink::reciprocal(1.0), sim);
  sim.seed = 2;
  const auto b = simulate_detection(baseline(), SourceLink::reciprocal(1.0), sim);
  EXPECT_NE(a.n_forwarding, b.n_forwarding);
}

TEST(SimulateDetection, FalseAlarmFallsWithThreshold) {
  SimConfig sim;
  sim.n_trials = 50000;
  sim.seed = 11;
  double prev = 1.0;
  for (int i = 0; i <= 60; ++i) {
    sim.tau = 0.9 + 1.2 * i / 60.0;
    const EmpiricalReport r = simulate_detection(baseline(), SourceLink::reciprocal(1.0), sim);
    EXPECT_LE(r.alpha->value, prev);
    prev = r.alpha->value;
  }
}

TEST(SimulateDetection, TooFewForwardingDraws) {
  SystemParams p = baseline();
  p.p_r_max = 0.5;
  SimConfig sim;
  sim.n_trials = 1000;
  EXPECT_THROW((void)simulate_detection(p, SourceLink::reciprocal(1.0), sim), DegenerateSample);
  sim.n_trials = 10;
  EXPECT_THROW((void)simulate_detection(baseline(), SourceLink::reciprocal(1.0), sim),
               InvalidParameter);
}

TEST(QuadratureOracle, EdgeCases) {
  const SystemParams p = baseline();
  const DerivedConstants k = baseline_constants();
  EXPECT_EQ(quadrature_rate_oracle(p, k, 0.0), 0.0);
  EXPECT_NEAR(quadrature_rate_oracle(p, k, 0.1), 0.08111844694522596, 1e-12);
  const PowerRateCoefficients c = power_rate_coefficients(p, k, 0.1);
  EXPECT_GT(c.beta1, c.beta2);
  EXPECT_GT(c.alpha1, c.alpha2);
}

}  // namespace
}  // namespace covert
