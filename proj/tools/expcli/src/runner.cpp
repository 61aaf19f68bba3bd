#include "expcli/runner.hpp"

#include <cmath>
#include <cstdio>
#include <variant>

#include "covert/covert_rate.hpp"
#include "covert/detection.hpp"
#include "covert/errors.hpp"
#include "covert/montecarlo.hpp"
#include "covert/optimizer.hpp"
#include "covert/parallel.hpp"
#include "covert/philox.hpp"

namespace expcli {
namespace {

// Monte Carlo estimates may sit exactly on an exact closed form (zero
// variance), so allow rounding on top of the 3 SE band.
constexpr double kCheckSigmas = 3.0;
constexpr double kCheckRoundoff = 1e-12;

struct Task {
  const Point* point;
  covert::SchemeConfig scheme;
};

struct RowResult {
  std::vector<Cell> cells;
  std::vector<std::string> warnings;
  bool check_failed = false;
};

bool is_rate(const covert::SchemeConfig& s) { return std::holds_alternative<covert::RateControl>(s); }

std::string scheme_name(const covert::SchemeConfig& s) { return is_rate(s) ? "rate" : "power"; }

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::vector<covert::SchemeConfig> schemes_for(SchemeChoice choice) {
  std::vector<covert::SchemeConfig> out;
  if (choice != SchemeChoice::Power) out.emplace_back(covert::RateControl{});
  if (choice != SchemeChoice::Rate) out.emplace_back(covert::PowerControl{});
  return out;
}

class Layout {
 public:
  Layout(const Scenario& scenario, bool use_points) {
    if (use_points && scenario.series) series_ = scenario.series->variable;
    if (use_points && scenario.sweep) sweep_ = scenario.sweep->variable;
  }

  std::vector<std::string> columns(std::initializer_list<const char*> rest) const {
    std::vector<std::string> out;
    if (series_) out.push_back(*series_);
    if (sweep_) out.push_back(*sweep_);
    out.emplace_back("scheme");
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
  }

  std::vector<Cell> prefix(const Task& t) const {
    std::vector<Cell> out;
    if (series_) out.emplace_back(*t.point->series_value);
    if (sweep_) out.emplace_back(*t.point->sweep_value);
    out.emplace_back(scheme_name(t.scheme));
    return out;
  }

  std::string where(const Task& t) const {
    std::string out;
    if (series_) out += *series_ + "=" + format_value(*t.point->series_value) + ", ";
    if (sweep_) out += *sweep_ + "=" + format_value(*t.point->sweep_value) + ", ";
    return out + scheme_name(t.scheme) + ": ";
  }

  PlotSpec plot(const Scenario& scenario, std::vector<std::string> ys, std::string title) const {
    PlotSpec spec;
    spec.y_columns = std::move(ys);
    spec.title = std::move(title);
    if (sweep_) {
      spec.x_column = *sweep_;
      spec.log_x = scenario.sweep->spacing == Spacing::Log;
      if (series_) spec.group_columns.push_back(*series_);
    } else if (series_) {
      spec.x_column = *series_;
    }
    spec.group_columns.emplace_back("scheme");
    return spec;
  }

 private:
  std::optional<std::string> series_;
  std::optional<std::string> sweep_;
};

template <class Fn>
RunResult collect(const std::vector<Task>& tasks, unsigned threads, Table table, Fn&& row_for) {
  std::vector<RowResult> rows(tasks.size());
  covert::parallel_for(tasks.size(), threads, [&](std::size_t i) { rows[i] = row_for(tasks[i]); });
  RunResult result;
  result.table = std::move(table);
  for (auto& r : rows) {
    result.table.add_row(std::move(r.cells));
    for (auto& w : r.warnings) result.warnings.push_back(std::move(w));
    if (r.check_failed) result.checks_passed = false;
  }
  return result;
}

std::vector<Task> make_tasks(const std::vector<Point>& points,
                             const std::vector<covert::SchemeConfig>& schemes) {
  std::vector<Task> tasks;
  for (const Point& p : points) {
    for (const auto& s : schemes) tasks.push_back({&p, s});
  }
  return tasks;
}

// Puts the point's q / p_delta into the scheme template.
covert::SchemeConfig configured(const covert::SchemeConfig& scheme, const Scenario& s) {
  if (is_rate(scheme)) return covert::RateControl{*s.q};
  return covert::PowerControl{*s.p_delta};
}

void append_estimate(std::vector<Cell>& cells, const std::optional<covert::Estimate>& e) {
  cells.push_back(e ? Cell{e->value} : Cell{});
  cells.push_back(e ? Cell{e->std_err} : Cell{});
}

RunResult run_evaluation(const Scenario& scenario, const std::vector<Point>& points,
                         bool use_points, const RunOptions& options, bool monte_carlo) {
  const Layout layout(scenario, use_points);
  const auto schemes = scenario.schemes();
  const auto tasks = make_tasks(points, schemes);
  auto names = layout.columns({"q", "p_delta", "status", "tau_star", "alpha", "beta", "xi_star",
                               "omega", "p_b", "p_c", "r_c"});
  if (monte_carlo) {
    for (const char* c : {"mc_p_b", "mc_p_b_se", "mc_p_c", "mc_p_c_se", "mc_alpha", "mc_alpha_se",
                          "mc_beta", "mc_beta_se", "mc_xi", "mc_xi_se", "mc_r_c", "mc_r_c_se",
                          "mc_check"}) {
      names.emplace_back(c);
    }
  }
  const std::size_t width = names.size();
  // Monte Carlo parallelizes internally, so points run one at a time there.
  const unsigned row_threads = monte_carlo ? 1u : options.threads;
  const std::uint64_t trials = options.trials.value_or(kDefaultVerifyTrials);

  auto row_for = [&](const Task& t) {
    RowResult r;
    const Scenario& s = t.point->scenario;
    const covert::SchemeConfig scheme = configured(t.scheme, s);
    const covert::SourceLink link = s.link();
    r.cells = layout.prefix(t);
    r.cells.push_back(is_rate(scheme) ? Cell{*s.q} : Cell{});
    r.cells.push_back(is_rate(scheme) ? Cell{} : Cell{*s.p_delta});

    covert::DerivedConstants constants;
    try {
      constants = covert::derive_constants(s.params, link.h_sr_sq);
    } catch (const covert::InfeasibleRate& e) {
      r.warnings.push_back(layout.where(t) + e.what() + "; reporting xi_star = 0, r_c = 0");
      r.cells.insert(r.cells.end(), {std::string("infeasible_rate"), Cell{}, Cell{}, Cell{}, 0.0,
                                     Cell{}, Cell{}, Cell{}, 0.0});
      r.cells.resize(width);
      return r;
    }

    covert::DetectionReport report;
    covert::RateReport rate;
    try {
      report = covert::optimal_threshold(scheme, s.params, constants, link.h_rs_sq);
      rate = covert::effective_rate(scheme, s.params, constants);
    } catch (const covert::PowerBudgetExceeded& e) {
      r.warnings.push_back(layout.where(t) + e.what());
      r.cells.emplace_back(std::string("power_budget_exceeded"));
      r.cells.resize(width);
      return r;
    }
    const covert::OpportunityProbs probs = covert::opportunity_probs(scheme, s.params, constants.mu);
    const bool detectable = report.status == covert::DetectionStatus::DetectableWithCertainty;
    r.cells.insert(r.cells.end(), {std::string(detectable ? "detectable" : "ok"), report.tau_star,
                                   report.alpha, report.beta, report.xi_star, report.omega,
                                   probs.p_b, probs.p_c, rate.r_c});
    if (!monte_carlo) return r;

    covert::SimConfig sim;
    sim.n_trials = trials;
    sim.seed = options.seed;
    sim.scheme = scheme;
    sim.tau = report.tau_star;
    sim.threads = options.threads;
    try {
      const covert::EmpiricalReport det = covert::simulate_detection(s.params, link, sim);
      const covert::EmpiricalReport eff = covert::simulate_effective_rate(s.params, link, sim);
      append_estimate(r.cells, det.p_b);
      append_estimate(r.cells, det.p_c);
      append_estimate(r.cells, det.alpha);
      append_estimate(r.cells, det.beta);
      append_estimate(r.cells, det.xi);
      append_estimate(r.cells, eff.r_c);

      bool ok = true;
      auto check = [&](const char* name, double closed, const std::optional<covert::Estimate>& e) {
        if (!e) return;
        const double miss = std::abs(closed - e->value);
        if (miss > kCheckSigmas * e->std_err + kCheckRoundoff) {
          ok = false;
          r.warnings.push_back(layout.where(t) + name + " closed form " + format_value(closed) +
                               " vs simulated " + format_value(e->value) + " +- " +
                               format_value(e->std_err));
        }
      };
      check("p_b", probs.p_b, det.p_b);
      check("p_c", probs.p_c, det.p_c);
      check("alpha", report.alpha, det.alpha);
      check("beta", report.beta, det.beta);
      check("r_c", rate.r_c, eff.r_c);
      r.cells.emplace_back(std::string(ok ? "pass" : "fail"));
      r.check_failed = !ok;
    } catch (const covert::DegenerateSample& e) {
      r.warnings.push_back(layout.where(t) + e.what() + "; no Monte Carlo columns");
      r.cells.resize(width);
    }
    return r;
  };

  RunResult result = collect(tasks, row_threads, Table(names), row_for);
  result.plot = layout.plot(scenario, {"xi_star", "r_c"},
                            monte_carlo ? "detection error and covert rate, simulated check"
                                        : "detection error and covert rate");
  return result;
}

covert::OptimizationResult optimize(const covert::SchemeConfig& scheme,
                                    const covert::SystemParams& params,
                                    const covert::SourceLink& link) {
  return is_rate(scheme) ? covert::maximize_rate_control(params, link)
                         : covert::maximize_power_control(params, link);
}

RunResult run_optimize(const Scenario& scenario, const std::vector<Point>& points,
                       const RunOptions& options) {
  const Layout layout(scenario, true);
  const auto tasks = make_tasks(points, schemes_for(scenario.scheme));
  const auto names = layout.columns({"status", "q_star", "p_delta_star", "tau_star", "alpha",
                                     "beta", "xi_star", "omega", "r_c_star"});
  const std::size_t width = names.size();

  auto row_for = [&](const Task& t) {
    RowResult r;
    const Scenario& s = t.point->scenario;
    r.cells = layout.prefix(t);
    covert::OptimizationResult opt;
    try {
      opt = optimize(t.scheme, s.params, s.link());
    } catch (const covert::InfeasibleRate& e) {
      r.warnings.push_back(layout.where(t) + e.what() + "; reporting xi_star = 0, r_c_star = 0");
      r.cells.insert(r.cells.end(), {std::string("infeasible_rate"), Cell{}, Cell{}, Cell{},
                                     Cell{}, Cell{}, 0.0, Cell{}, 0.0});
      return r;
    }
    if (opt.status == covert::OptimizationStatus::NoFeasiblePoint) {
      r.cells.insert(r.cells.end(), {std::string("no_feasible_point"), Cell{}, Cell{}, Cell{},
                                     Cell{}, Cell{}, Cell{}, opt.report.omega, 0.0});
      return r;
    }
    const covert::DetectionReport& d = opt.report;
    const bool detectable = d.status == covert::DetectionStatus::DetectableWithCertainty;
    r.cells.emplace_back(std::string(detectable ? "detectable" : "ok"));
    r.cells.push_back(is_rate(t.scheme) ? Cell{opt.control_star} : Cell{});
    r.cells.push_back(is_rate(t.scheme) ? Cell{} : Cell{opt.control_star});
    r.cells.insert(r.cells.end(),
                   {d.tau_star, d.alpha, d.beta, d.xi_star, d.omega, opt.r_c_star});
    r.cells.resize(width);
    return r;
  };

  RunResult result = collect(tasks, options.threads, Table(names), row_for);
  result.plot = layout.plot(scenario, {"r_c_star", "xi_star"}, "optimal covert rate");
  return result;
}

RunResult run_average(const Scenario& scenario, const std::vector<Point>& points,
                      const RunOptions& options) {
  if (scenario.h_sr_sq || scenario.h_rs_sq) {
    throw ScenarioError("average draws the source-relay gain; remove h_sr_sq and h_rs_sq");
  }
  const std::uint64_t draws = options.trials.value_or(kDefaultAverageDraws);
  if (draws == 0) throw ScenarioError("average needs at least one draw");

  // The same gains serve every point, so curves differ only through the
  // parameters.
  std::vector<double> gains(draws);
  for (std::uint64_t i = 0; i < draws; ++i) {
    covert::TrialStream stream(options.seed, i,
                               static_cast<std::uint32_t>(covert::Substream::SourceChannel));
    gains[i] = stream.exponential();
  }

  const Layout layout(scenario, true);
  const auto tasks = make_tasks(points, schemes_for(scenario.scheme));
  Table table(layout.columns({"n_draws", "n_infeasible", "r_c_star_mean", "r_c_star_se"}));
  RunResult result;
  std::vector<double> rates(draws);
  std::vector<char> infeasible(draws);
  for (const Task& t : tasks) {
    const covert::SystemParams& params = t.point->scenario.params;
    covert::parallel_for(draws, options.threads, [&](std::size_t i) {
      try {
        rates[i] = optimize(t.scheme, params, covert::SourceLink::reciprocal(gains[i])).r_c_star;
        infeasible[i] = 0;
      } catch (const covert::InfeasibleRate&) {
        rates[i] = 0.0;
        infeasible[i] = 1;
      }
    });
    double sum = 0.0;
    std::int64_t n_infeasible = 0;
    for (std::uint64_t i = 0; i < draws; ++i) {
      sum += rates[i];
      n_infeasible += infeasible[i];
    }
    const double n = static_cast<double>(draws);
    const double mean = sum / n;
    Cell se;
    if (draws > 1) {
      double sq = 0.0;
      for (double x : rates) sq += (x - mean) * (x - mean);
      se = std::sqrt(sq / (n - 1.0) / n);
    }
    auto cells = layout.prefix(t);
    cells.insert(cells.end(), {static_cast<std::int64_t>(draws), n_infeasible, mean, se});
    table.add_row(std::move(cells));
  }
  result.table = std::move(table);
  result.plot = layout.plot(scenario, {"r_c_star_mean"}, "optimal covert rate, averaged over source gains");
  return result;
}

}  // namespace

std::vector<Point> expand_points(const Scenario& scenario) {
  const std::vector<std::optional<double>> unset{std::nullopt};
  std::vector<std::optional<double>> series_values = unset;
  std::vector<std::optional<double>> sweep_values = unset;
  if (scenario.series) series_values.assign(scenario.series->values.begin(), scenario.series->values.end());
  if (scenario.sweep) {
    const auto v = scenario.sweep->values();
    sweep_values.assign(v.begin(), v.end());
  }
  std::vector<Point> points;
  for (const auto& a : series_values) {
    for (const auto& b : sweep_values) {
      Point p{a, b, scenario};
      if (a) set_value(p.scenario, scenario.series->variable, *a);
      if (b) set_value(p.scenario, scenario.sweep->variable, *b);
      p.scenario.params.validate();
      points.push_back(std::move(p));
    }
  }
  return points;
}

RunResult run(Mode mode, const Scenario& scenario, const RunOptions& options) {
  switch (mode) {
    case Mode::Eval: {
      RunResult r = run_evaluation(scenario, {Point{std::nullopt, std::nullopt, scenario}}, false,
                                   options, options.monte_carlo);
      if (scenario.sweep || scenario.series) {
        r.warnings.insert(r.warnings.begin(), "eval uses the base point only; [sweep] and [series] are ignored");
      }
      return r;
    }
    case Mode::Sweep:
      if (!scenario.sweep) throw ScenarioError("sweep needs a [sweep] section");
      return run_evaluation(scenario, expand_points(scenario), true, options, options.monte_carlo);
    case Mode::Verify:
      return run_evaluation(scenario, expand_points(scenario), true, options, true);
    case Mode::Optimize:
      return run_optimize(scenario, expand_points(scenario), options);
    case Mode::Average:
      return run_average(scenario, expand_points(scenario), options);
  }
  throw ScenarioError("unknown mode");
}

}  // namespace expcli
