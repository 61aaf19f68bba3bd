#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "expcli/scenario_file.hpp"
#include "expcli/table.hpp"

namespace expcli {
namespace {

Scenario parse(const std::string& text) {
  std::istringstream in(text);
  return parse_scenario(in);
}

std::string parse_error(const std::string& text) {
  try {
    (void)parse(text);
  } catch (const ScenarioError& e) {
    return e.what();
  }
  return "no error";
}

TEST(ScenarioFile, EveryShippedScenarioRoundTrips) {
  int count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(COVERT_SCENARIO_DIR)) {
    if (entry.path().extension() != ".scn") continue;
    const Scenario first = load_scenario(entry.path());
    std::istringstream text(serialize(first));
    const Scenario second = parse_scenario(text, entry.path().string());
    EXPECT_EQ(first, second) << entry.path();
    EXPECT_EQ(serialize(first), serialize(second)) << entry.path();
    ++count;
  }
  EXPECT_GE(count, 7);
}

TEST(ScenarioFile, DecibelKeysAreConverted) {
  const Scenario s = parse("p_s_db = 10\nsigma_d_sq_db = -10\np_r_max = 3\nq_db = -10\n");
  EXPECT_DOUBLE_EQ(s.params.p_s, 10.0);
  EXPECT_DOUBLE_EQ(s.params.sigma_d_sq, 0.1);
  EXPECT_DOUBLE_EQ(s.params.p_r_max, 3.0);
  EXPECT_DOUBLE_EQ(*s.q, 0.1);
}

TEST(ScenarioFile, CommentsBlankLinesAndWhitespace) {
  const Scenario s = parse("# header\n\n   r_sd   =  1.5   # inline\n\tscheme=power\np_delta=0.2\n");
  EXPECT_DOUBLE_EQ(s.params.r_sd, 1.5);
  EXPECT_EQ(s.scheme, SchemeChoice::Power);
  EXPECT_DOUBLE_EQ(*s.p_delta, 0.2);
}

TEST(ScenarioFile, DefaultsWhenOmitted) {
  const Scenario s = parse("");
  EXPECT_EQ(s.params, covert::SystemParams{});
  EXPECT_EQ(s.scheme, SchemeChoice::Rate);
  EXPECT_FALSE(s.q);
  EXPECT_FALSE(s.sweep);
  EXPECT_DOUBLE_EQ(s.link().h_sr_sq, 1.0);
}

TEST(ScenarioFile, ReverseLinkDefaultsToForward) {
  const Scenario s = parse("h_sr_sq = 2.5\n");
  EXPECT_DOUBLE_EQ(s.link().h_rs_sq, 2.5);
  EXPECT_DOUBLE_EQ(parse("h_sr_sq = 2.5\nh_rs_sq = 0.5\n").link().h_rs_sq, 0.5);
}

TEST(ScenarioFile, SweepAndSeries) {
  const Scenario s = parse(
      "[sweep]\nvariable = r_sd\nstart = 0.01\nstop = 1\npoints = 3\nspacing = log\n"
      "[series]\nvariable = p_r_max_db\nvalues = 10, 20,30\n");
  ASSERT_TRUE(s.sweep && s.series);
  const auto v = s.sweep->values();
  ASSERT_EQ(v.size(), 3u);
  EXPECT_DOUBLE_EQ(v[0], 0.01);
  EXPECT_NEAR(v[1], 0.1, 1e-15);
  EXPECT_DOUBLE_EQ(v[2], 1.0);
  EXPECT_EQ(s.series->values, (std::vector<double>{10.0, 20.0, 30.0}));
}

TEST(ScenarioFile, LinearSweepHitsEndpoints) {
  const SweepSpec sweep{"p_r_max_db", 0.0, 30.0, 31, Spacing::Linear};
  const auto v = sweep.values();
  ASSERT_EQ(v.size(), 31u);
  EXPECT_EQ(v.front(), 0.0);
  EXPECT_EQ(v[13], 13.0);
  EXPECT_EQ(v.back(), 30.0);
}

TEST(ScenarioFile, ErrorsCarryLineNumbers) {
  EXPECT_NE(parse_error("p_s = 1\n\nbogus = 2\n").find("<input>:3:"), std::string::npos);
  EXPECT_NE(parse_error("p_s = abc\n").find("<input>:1: expected a number"), std::string::npos);
  EXPECT_NE(parse_error("p_s = 1\np_s_db = 10\n").find("<input>:2:"), std::string::npos);
  EXPECT_NE(parse_error("r_sd\n").find("<input>:1: expected 'key = value'"), std::string::npos);
  EXPECT_NE(parse_error("[plot]\n").find("unknown section"), std::string::npos);
  EXPECT_NE(parse_error("[sweep]\nvariable = scheme\n").find("<input>:2: cannot sweep"),
            std::string::npos);
  EXPECT_NE(parse_error("[sweep\n").find("unterminated"), std::string::npos);
  EXPECT_NE(parse_error("scheme = hybrid\n").find("<input>:1:"), std::string::npos);
  EXPECT_NE(parse_error("[sweep]\nvariable = r_sd\npoints = 2.5\n").find("<input>:3:"),
            std::string::npos);
  EXPECT_NE(parse_error("p_s = 1e999\n").find("<input>:1:"), std::string::npos);
}

TEST(ScenarioFile, SchemeAndControlMustAgree) {
  EXPECT_NE(parse_error("scheme = power\nq = 0.1\n").find("q given"), std::string::npos);
  EXPECT_NE(parse_error("scheme = rate\np_delta = 0.1\n").find("p_delta given"),
            std::string::npos);
  EXPECT_THROW((void)parse("scheme = power\n").schemes(), ScenarioError);
  EXPECT_EQ(parse("scheme = both\nq = 1\np_delta = 1\n").schemes().size(), 2u);
}

TEST(ScenarioFile, InvalidParametersAreRejected) {
  EXPECT_NE(parse_error("p_s = -1\n").find("<input>:"), std::string::npos);
  EXPECT_NE(parse_error("epsilon = 2\n").find("<input>:"), std::string::npos);
  EXPECT_NE(parse_error("[sweep]\nvariable = r_sd\nstart = 0\nstop = 1\nspacing = log\n")
                .find("log spacing"),
            std::string::npos);
  EXPECT_NE(parse_error("[sweep]\nvariable = p_s\n[series]\nvariable = p_s_db\nvalues = 1\n")
                .find("same quantity"),
            std::string::npos);
}

TEST(ScenarioFile, SetValueUsesDecibelSuffix) {
  Scenario s;
  set_value(s, "p_r_max_db", 20.0);
  EXPECT_DOUBLE_EQ(s.params.p_r_max, 100.0);
  set_value(s, "r_sd", 0.5);
  EXPECT_DOUBLE_EQ(s.params.r_sd, 0.5);
  EXPECT_THROW(set_value(s, "r_sd_db", 1.0), ScenarioError);
  EXPECT_TRUE(is_numeric_key("h_rs_sq_db"));
  EXPECT_FALSE(is_numeric_key("scheme"));
}

TEST(Csv, NumberFormatting) {
  EXPECT_EQ(format_cell(0.1), "0.1");
  EXPECT_EQ(format_cell(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_cell(1e-20), "1e-20");
  EXPECT_EQ(format_cell(123456789012345.0), "1.23456789012e+14");
  EXPECT_EQ(format_cell(0.0), "0");
  EXPECT_EQ(format_cell(Cell{}), "");
  EXPECT_EQ(format_cell(std::nan("")), "");
  EXPECT_EQ(format_cell(std::int64_t{42}), "42");
  EXPECT_EQ(format_cell(std::string("a,b")), "\"a,b\"");
}

TEST(Csv, HeaderAndMissingCells) {
  Table t({"x", "y", "label"});
  t.add_row({1.0, Cell{}, std::string("rate")});
  t.add_row({2.5, 0.0, Cell{}});
  EXPECT_EQ(t.to_csv(), "x,y,label\n1,,rate\n2.5,0,\n");
  EXPECT_FALSE(t.number(0, "y"));
  EXPECT_EQ(*t.number(1, "y"), 0.0);
  EXPECT_EQ(*t.label(0, "label"), "rate");
  EXPECT_THROW(t.add_row({1.0}), std::invalid_argument);
}

TEST(PlotScript, EmbedsDataAndColumns) {
  Table t({"p_r_max_db", "scheme", "xi_star"});
  t.add_row({0.0, std::string("rate"), 0.25});
  const std::string script = plot_script(t, {"p_r_max_db", {"xi_star"}, {"scheme"}, false, "demo"});
  EXPECT_NE(script.find("import matplotlib"), std::string::npos);
  EXPECT_NE(script.find("p_r_max_db,scheme,xi_star\n0,rate,0.25\n"), std::string::npos);
  EXPECT_NE(script.find("YS = [\"xi_star\"]"), std::string::npos);
}

}  // namespace
}  // namespace expcli
