#include "covert/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "covert/covert_rate.hpp"
#include "covert/errors.hpp"

namespace covert {
namespace {

constexpr int kRefineBits = 40;

struct Candidate {
  double control = 0.0;
  double rate = 0.0;
  DetectionReport report;
  bool feasible = false;
};

// Scans the grid upward until the first infeasible point, then polishes the
// best cell. RateFn: control -> R_c, DetectFn: control -> DetectionReport.
template <class RateFn, class DetectFn>
OptimizationResult search_connected(const std::vector<double>& grid, RateFn rate,
                                    DetectFn detect, double epsilon) {
  auto evaluate = [&](double x) {
    Candidate c;
    c.control = x;
    c.report = detect(x);
    c.feasible = covertness_slack(c.report, epsilon) >= 0.0;
    c.rate = c.feasible ? rate(x) : 0.0;
    return c;
  };

  std::size_t first_bad = grid.size();
  std::size_t best_index = 0;
  Candidate best;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    Candidate c = evaluate(grid[i]);
    if (!c.feasible) {
      first_bad = i;
      if (i == 0) best = std::move(c);
      break;
    }
    if (i == 0 || c.rate > best.rate) {
      best = std::move(c);
      best_index = i;
    }
  }

  OptimizationResult result;
  if (first_bad == 0) {
    result.report = best.report;
    return result;
  }

  const double left = grid[best_index == 0 ? 0 : best_index - 1];
  double right = grid[std::min(best_index + 1, grid.size() - 1)];
  if (best_index + 1 == first_bad) {
    auto feasible = [&](double x) { return covertness_slack(detect(x), epsilon) >= 0.0; };
    double lo = grid[best_index];
    double hi = right;
    // Bisect on feasibility for the largest admissible control in the cell.
    while (hi - lo > 1e-13 * hi) {
      const double mid = 0.5 * (lo + hi);
      (feasible(mid) ? lo : hi) = mid;
    }
    right = lo;
    Candidate edge = evaluate(right);
    if (edge.feasible && edge.rate > best.rate) best = std::move(edge);
  }
  if (right > left) {
    auto negated = [&](double x) { return -rate(x); };
    const auto polished = boost::math::tools::brent_find_minima(negated, left, right, kRefineBits);
    if (-polished.second > best.rate) {
      Candidate c = evaluate(polished.first);
      if (c.feasible && c.rate > best.rate) best = std::move(c);
    }
  }

  result.control_star = best.control;
  result.r_c_star = best.rate;
  result.report = best.report;
  result.status = OptimizationStatus::Optimal;
  return result;
}

}  // namespace

double covertness_slack(const DetectionReport& report, double epsilon) {
  return report.xi_star - (report.omega - epsilon);
}

OptimizationResult maximize_rate_control(const SystemParams& params, const SourceLink& link,
                                         const SearchGrid& grid) {
  params.validate();
  const DerivedConstants constants = derive_constants(params, link.h_sr_sq);

  std::vector<double> qs(grid.points);
  const double log_lo = std::log(grid.q_min * params.sigma_d_sq);
  const double log_hi = std::log(grid.q_max * params.sigma_d_sq);
  for (std::size_t i = 0; i < qs.size(); ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(qs.size() - 1);
    qs[i] = std::exp(log_lo + t * (log_hi - log_lo));
  }
  auto rate = [&](double q) {
    return effective_rate(RateControl{q}, params, constants).r_c;
  };
  auto detect = [&](double q) {
    return optimal_threshold(RateControl{q}, params, constants, link.h_rs_sq);
  };
  return search_connected(qs, rate, detect, params.epsilon);
}

OptimizationResult maximize_power_control(const SystemParams& params, const SourceLink& link,
                                          const SearchGrid& grid) {
  params.validate();
  const DerivedConstants constants = derive_constants(params, link.h_sr_sq);
  const double top = covert_power_bound(params, constants) * (1.0 - grid.p_delta_margin);

  std::vector<double> ps(grid.points);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    ps[i] = top * static_cast<double>(i) / static_cast<double>(ps.size() - 1);
  }
  auto rate = [&](double p) {
    return effective_rate(PowerControl{p}, params, constants).r_c;
  };
  auto detect = [&](double p) {
    return optimal_threshold(PowerControl{p}, params, constants, link.h_rs_sq);
  };
  return search_connected(ps, rate, detect, params.epsilon);
}

double xi_limit(const SystemParams& params, const DerivedConstants& constants, double q) {
  const double phi_mu = constants.phi * constants.mu;
  const double a = phi_mu * params.sigma_d_sq;
  const double b = (phi_mu + 1.0) * q;
  if (b == 0.0) return 0.5;
  if (a == 0.0) return 0.0;
  const double f1 = b / (a + b);
  const double f2 = std::exp(-(a / b) * std::log1p(b / a));
  return 0.5 * (1.0 - f1 * f2);
}

double q_epsilon(const SystemParams& params, const DerivedConstants& constants) {
  const double eps = params.epsilon;
  if (!(eps < 0.5)) throw DomainError("q_epsilon needs epsilon < 1/2");
  const double phi_mu = constants.phi * constants.mu;
  return phi_mu * params.sigma_d_sq / (phi_mu + 1.0) * (2.0 * eps / (1.0 - 2.0 * eps));
}

Asymptotics asymptotics(const SystemParams& params, const DerivedConstants& constants,
                        double q) {
  return {xi_limit(params, constants, q), q_epsilon(params, constants)};
}

}  // namespace covert
