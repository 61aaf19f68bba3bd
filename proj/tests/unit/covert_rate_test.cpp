#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "covert/covert_rate.hpp"
#include "covert/errors.hpp"
#include "covert/montecarlo.hpp"
#include "fixtures.hpp"

namespace covert {
namespace {

using testing::baseline;
using testing::baseline_constants;

// Ei(-z) = -integral_z^inf e^{-t}/t dt.
double ei_by_quadrature(double x) {
  boost::math::quadrature::exp_sinh<double> integrator;
  const double z = -x;
  return -integrator.integrate([](double t) { return std::exp(-t) / t; }, z,
                               std::numeric_limits<double>::infinity());
}

// Effective rate integrated directly over |h_rd|^2 above the covert threshold.
double power_rate_by_channel_integral(const SystemParams& p, const DerivedConstants& k,
                                      double p_delta) {
  const double start = covert_threshold(PowerControl{p_delta}, p, k.mu);
  boost::math::quadrature::exp_sinh<double> integrator;
  auto f = [&](double h) {
    const double gamma = covert_sinr(PowerControl{p_delta}, p, k, {k.h_sr_sq, h, k.h_sr_sq});
    return std::log2(1.0 + gamma) * std::exp(-h);
  };
  return integrator.integrate(f, start, std::numeric_limits<double>::infinity());
}

TEST(ExpIntegral, ReferenceValues) {
  EXPECT_NEAR(exp_integral(-1.0), -0.219383934395520, 1e-14);
  EXPECT_NEAR(exp_integral(-10.0), -4.15696892968532e-6, 1e-18);
}

TEST(ExpIntegral, MatchesQuadrature) {
  for (double x : {-1e-6, -1e-3, -0.1, -0.5, -0.999, -1.0, -1.001, -2.0, -5.9, -6.0, -6.1, -15.0,
                   -40.0, -300.0}) {
    const double expected = ei_by_quadrature(x);
    EXPECT_NEAR(exp_integral(x), expected, 1e-12 * std::abs(expected)) << x;
  }
}

TEST(ExpIntegral, MatchesStandardLibrary) {
  // libstdc++ drifts beyond |x| ~ 50, so compare only below that.
  for (int i = 0; i <= 400; ++i) {
    const double x = -std::pow(10.0, -6.0 + 7.5 * i / 400.0);
    const double expected = std::expint(x);
    ASSERT_NEAR(exp_integral(x), expected, 2e-13 * std::abs(expected)) << x;
  }
}

TEST(ExpIntegral, DerivativeIsExpOverX) {
  for (int i = 0; i < 20; ++i) {
    const double x = -std::pow(10.0, std::log10(20.0) - (std::log10(20.0) + 3.0) * i / 19.0);
    const double h = 1e-5 * std::abs(x);
    const double fd = (exp_integral(x + h) - exp_integral(x - h)) / (2.0 * h);
    const double exact = std::exp(x) / x;
    EXPECT_NEAR(fd, exact, 1e-6 * std::abs(exact)) << x;
  }
}

TEST(ExpIntegral, DomainAndSingularity) {
  EXPECT_THROW((void)exp_integral(0.0), DomainError);
  EXPECT_THROW((void)exp_integral(1.0), DomainError);
  EXPECT_LT(exp_integral(-1e-12), exp_integral(-1e-6));
  EXPECT_NEAR(exp_integral(-1e-12), std::numbers::egamma + std::log(1e-12), 1e-11);
  EXPECT_LT(exp_integral(-3.0), 0.0);
}

TEST(ExpIntegral, ScaledFormStaysFinite) {
  EXPECT_NEAR(scaled_exp_integral_e1(1e6), 1.0 / (1e6 + 1.0), 1e-17);
  EXPECT_NEAR(scaled_exp_integral_e1(2.0), -std::exp(2.0) * std::expint(-2.0), 1e-15);
  EXPECT_THROW((void)scaled_exp_integral_e1(0.0), DomainError);
}

TEST(CovertSinr, RateControlBaseline) {
  const double g = covert_sinr(RateControl{0.1}, baseline(), baseline_constants(), {});
  EXPECT_NEAR(g, 0.06796116504854369, 1e-15);
  EXPECT_EQ(covert_sinr(RateControl{0.0}, baseline(), baseline_constants(), {}), 0.0);
}

TEST(CovertSinr, PowerControlLimits) {
  const DerivedConstants k = baseline_constants();
  const double g = covert_sinr(PowerControl{0.1}, baseline(), k, {1.0, 1e12, 1.0});
  EXPECT_NEAR(g, (k.first_hop_snr() + 1.0) / k.mu, 1e-9);
  EXPECT_EQ(covert_sinr(PowerControl{0.0}, baseline(), k, {1.0, 1.0, 1.0}), 0.0);
}

TEST(EffectiveRate, RateControlBaseline) {
  const RateReport r = effective_rate(RateControl{0.1}, baseline(), baseline_constants());
  ASSERT_TRUE(r.gamma_delta && r.r_delta);
  EXPECT_NEAR(*r.r_delta, 0.09485918634144118, 1e-15);
  EXPECT_NEAR(r.p_c, 0.5894464348241792, 1e-15);
  EXPECT_NEAR(r.r_c, 0.05591440919928498, 1e-15);
  EXPECT_EQ(r.r_c, *r.r_delta * r.p_c);
}

TEST(EffectiveRate, PowerControlBaseline) {
  const SystemParams p = baseline();
  const DerivedConstants k = baseline_constants();
  const RateReport r = effective_rate(PowerControl{0.1}, p, k);
  EXPECT_FALSE(r.gamma_delta);
  EXPECT_NEAR(r.r_c, 0.08111844694522605, 1e-13);
  EXPECT_NEAR(r.r_c, power_rate_by_channel_integral(p, k, 0.1), 1e-6 * r.r_c);
  EXPECT_NEAR(r.r_c, quadrature_rate_oracle(p, k, 0.1), 1e-6 * r.r_c);
}

TEST(EffectiveRate, ZeroControlGivesZero) {
  EXPECT_EQ(effective_rate(RateControl{0.0}, baseline(), baseline_constants()).r_c, 0.0);
  EXPECT_EQ(effective_rate(PowerControl{0.0}, baseline(), baseline_constants()).r_c, 0.0);
  EXPECT_THROW((void)effective_rate(PowerControl{5.0}, baseline(), baseline_constants()),
               PowerBudgetExceeded);
}

TEST(EffectiveRate, PowerControlClosedFormOnGrid) {
  for (int i = 0; i < 10; ++i) {
    SystemParams p = baseline();
    p.p_r_max = db_to_linear(-5.0 + 4.0 * i);
    const DerivedConstants k = derive_constants(p, 1.0);
    const double cap = 0.999 * p.p_r_max / (k.mu + 1.0);
    for (int j = 1; j <= 10; ++j) {
      const double pd = cap * j / 10.0;
      const double closed = effective_rate(PowerControl{pd}, p, k).r_c;
      const double direct = power_rate_by_channel_integral(p, k, pd);
      ASSERT_GE(closed, 0.0);
      ASSERT_NEAR(closed, direct, 1e-6 * direct) << p.p_r_max << ' ' << pd;
    }
  }
}

TEST(EffectiveRate, RateControlPeaksInside) {
  const SystemParams p = baseline();
  const DerivedConstants k = baseline_constants();
  auto rc = [&](double q) { return effective_rate(RateControl{q}, p, k).r_c; };
  EXPECT_LT(rc(1e-8), 1e-8);
  EXPECT_LT(rc(1e4), 1e-100);
  double best = 0.0;
  for (int i = 0; i <= 200; ++i) best = std::max(best, rc(std::pow(10.0, -4.0 + 6.0 * i / 200.0)));
  EXPECT_GT(best, rc(1e-4));
  EXPECT_GT(best, rc(1e2));
}

}  // namespace
}  // namespace covert
