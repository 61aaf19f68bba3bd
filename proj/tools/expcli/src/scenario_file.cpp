#include "expcli/scenario_file.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "covert/errors.hpp"

namespace expcli {
namespace {

using Setter = std::function<void(Scenario&, double)>;

struct KeyInfo {
  std::string canonical;  // linear key name, shared by the _db alias
  Setter set;
};

const std::map<std::string, KeyInfo, std::less<>>& key_table() {
  static const std::map<std::string, KeyInfo, std::less<>> table = [] {
    std::map<std::string, KeyInfo, std::less<>> t;
    auto add = [&t](const std::string& name, bool has_db, Setter set) {
      t[name] = {name, set};
      if (has_db) {
        t[name + "_db"] = {name, [set](Scenario& s, double v) { set(s, covert::db_to_linear(v)); }};
      }
    };
    add("p_s", true, [](Scenario& s, double v) { s.params.p_s = v; });
    add("p_r_max", true, [](Scenario& s, double v) { s.params.p_r_max = v; });
    add("sigma_r_sq", true, [](Scenario& s, double v) { s.params.sigma_r_sq = v; });
    add("sigma_d_sq", true, [](Scenario& s, double v) { s.params.sigma_d_sq = v; });
    add("sigma_s_sq", true, [](Scenario& s, double v) { s.params.sigma_s_sq = v; });
    add("r_sd", false, [](Scenario& s, double v) { s.params.r_sd = v; });
    add("epsilon", false, [](Scenario& s, double v) { s.params.epsilon = v; });
    add("h_sr_sq", true, [](Scenario& s, double v) { s.h_sr_sq = v; });
    add("h_rs_sq", true, [](Scenario& s, double v) { s.h_rs_sq = v; });
    add("q", true, [](Scenario& s, double v) { s.q = v; });
    add("p_delta", true, [](Scenario& s, double v) { s.p_delta = v; });
    return t;
  }();
  return table;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

class LineError {
 public:
  LineError(const std::string& name, std::size_t line) : prefix_(name + ":" + std::to_string(line) + ": ") {}
  [[noreturn]] void fail(const std::string& what) const { throw ScenarioError(prefix_ + what); }

 private:
  std::string prefix_;
};

double parse_number(std::string_view text, const LineError& where) {
  double value = 0.0;
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty() || !std::isfinite(value)) {
    where.fail("expected a number, got '" + std::string(text) + "'");
  }
  return value;
}

std::string format_exact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

enum class Section { Top, Sweep, Series };

void check_consistency(const Scenario& s, const std::string& name) {
  const auto fail = [&](const std::string& what) { throw ScenarioError(name + ": " + what); };
  if (s.scheme == SchemeChoice::Rate && s.p_delta) fail("p_delta given but scheme is rate");
  if (s.scheme == SchemeChoice::Power && s.q) fail("q given but scheme is power");
  try {
    s.params.validate();
    if (s.q) covert::validate(covert::RateControl{*s.q});
    if (s.p_delta) covert::validate(covert::PowerControl{*s.p_delta});
  } catch (const covert::InvalidParameter& e) {
    fail(e.what());
  }
  if (s.sweep) {
    if (s.sweep->variable.empty()) fail("[sweep] needs a variable");
    if (s.sweep->points < 1) fail("[sweep] needs at least one point");
    if (s.sweep->spacing == Spacing::Log && !(s.sweep->start > 0.0 && s.sweep->stop > 0.0)) {
      fail("log spacing needs positive start and stop");
    }
  }
  if (s.series) {
    if (s.series->variable.empty()) fail("[series] needs a variable");
    if (s.series->values.empty()) fail("[series] needs values");
  }
  if (s.sweep && s.series &&
      key_table().find(s.sweep->variable)->second.canonical ==
          key_table().find(s.series->variable)->second.canonical) {
    fail("sweep and series vary the same quantity");
  }
}

}  // namespace

std::vector<double> SweepSpec::values() const {
  std::vector<double> out(points);
  if (points == 1) {
    out[0] = start;
    return out;
  }
  for (std::size_t i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(points - 1);
    out[i] = spacing == Spacing::Linear ? start + t * (stop - start)
                                        : start * std::pow(stop / start, t);
  }
  out.back() = stop;
  return out;
}

covert::SourceLink Scenario::link() const {
  const double h_sr = h_sr_sq.value_or(1.0);
  return {h_sr, h_rs_sq.value_or(h_sr)};
}

std::vector<covert::SchemeConfig> Scenario::schemes() const {
  std::vector<covert::SchemeConfig> out;
  if (scheme != SchemeChoice::Power) {
    if (!q) throw ScenarioError("scheme " + std::string(to_string(scheme)) + " needs q");
    out.emplace_back(covert::RateControl{*q});
  }
  if (scheme != SchemeChoice::Rate) {
    if (!p_delta) throw ScenarioError("scheme " + std::string(to_string(scheme)) + " needs p_delta");
    out.emplace_back(covert::PowerControl{*p_delta});
  }
  return out;
}

bool is_numeric_key(std::string_view key) { return key_table().contains(key); }

void set_value(Scenario& scenario, std::string_view key, double value) {
  const auto it = key_table().find(key);
  if (it == key_table().end()) throw ScenarioError("unknown key '" + std::string(key) + "'");
  it->second.set(scenario, value);
}

std::string_view to_string(SchemeChoice choice) {
  switch (choice) {
    case SchemeChoice::Rate: return "rate";
    case SchemeChoice::Power: return "power";
    case SchemeChoice::Both: return "both";
  }
  return "rate";
}

Scenario parse_scenario(std::istream& in, const std::string& name) {
  Scenario s;
  Section section = Section::Top;
  std::set<std::string> seen_top;
  std::set<std::string> seen_section;
  std::string raw;
  std::size_t line_no = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    const LineError where(name, line_no);
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') where.fail("unterminated section header");
      const std::string_view title = trim(line.substr(1, line.size() - 2));
      seen_section.clear();
      if (title == "sweep") {
        if (s.sweep) where.fail("duplicate [sweep] section");
        section = Section::Sweep;
        s.sweep.emplace();
      } else if (title == "series") {
        if (s.series) where.fail("duplicate [series] section");
        section = Section::Series;
        s.series.emplace();
      } else {
        where.fail("unknown section [" + std::string(title) + "]");
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) where.fail("expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) where.fail("missing key");
    if (value.empty()) where.fail("missing value for '" + key + "'");

    if (section == Section::Top) {
      if (key == "scheme") {
        if (!seen_top.insert(key).second) where.fail("duplicate key 'scheme'");
        if (value == "rate") s.scheme = SchemeChoice::Rate;
        else if (value == "power") s.scheme = SchemeChoice::Power;
        else if (value == "both") s.scheme = SchemeChoice::Both;
        else where.fail("scheme must be rate, power or both");
        continue;
      }
      const auto it = key_table().find(key);
      if (it == key_table().end()) where.fail("unknown key '" + key + "'");
      if (!seen_top.insert(it->second.canonical).second) {
        where.fail("'" + key + "' set twice");
      }
      it->second.set(s, parse_number(value, where));
      continue;
    }

    if (!seen_section.insert(key).second) where.fail("duplicate key '" + key + "'");
    if (section == Section::Sweep) {
      SweepSpec& sw = *s.sweep;
      if (key == "variable") {
        if (!is_numeric_key(value)) where.fail("cannot sweep '" + std::string(value) + "'");
        sw.variable = value;
      } else if (key == "start") {
        sw.start = parse_number(value, where);
      } else if (key == "stop") {
        sw.stop = parse_number(value, where);
      } else if (key == "points") {
        const double n = parse_number(value, where);
        if (n < 1 || n != std::floor(n)) where.fail("points must be a positive integer");
        sw.points = static_cast<std::size_t>(n);
      } else if (key == "spacing") {
        if (value == "linear") sw.spacing = Spacing::Linear;
        else if (value == "log") sw.spacing = Spacing::Log;
        else where.fail("spacing must be linear or log");
      } else {
        where.fail("unknown [sweep] key '" + key + "'");
      }
    } else {
      SeriesSpec& se = *s.series;
      if (key == "variable") {
        if (!is_numeric_key(value)) where.fail("cannot vary '" + std::string(value) + "'");
        se.variable = value;
      } else if (key == "values") {
        std::string_view rest = value;
        while (!rest.empty()) {
          const auto comma = rest.find(',');
          se.values.push_back(parse_number(trim(rest.substr(0, comma)), where));
          if (comma == std::string_view::npos) break;
          rest = rest.substr(comma + 1);
        }
      } else {
        where.fail("unknown [series] key '" + key + "'");
      }
    }
  }
  check_consistency(s, name);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file " + path.string());
  return parse_scenario(in, path.string());
}

std::string serialize(const Scenario& s) {
  std::ostringstream out;
  auto line = [&](const char* key, double v) { out << key << " = " << format_exact(v) << '\n'; };
  line("p_s", s.params.p_s);
  line("p_r_max", s.params.p_r_max);
  line("sigma_r_sq", s.params.sigma_r_sq);
  line("sigma_d_sq", s.params.sigma_d_sq);
  line("sigma_s_sq", s.params.sigma_s_sq);
  line("r_sd", s.params.r_sd);
  line("epsilon", s.params.epsilon);
  if (s.h_sr_sq) line("h_sr_sq", *s.h_sr_sq);
  if (s.h_rs_sq) line("h_rs_sq", *s.h_rs_sq);
  out << "scheme = " << to_string(s.scheme) << '\n';
  if (s.q) line("q", *s.q);
  if (s.p_delta) line("p_delta", *s.p_delta);
  if (s.sweep) {
    out << "\n[sweep]\nvariable = " << s.sweep->variable << '\n';
    line("start", s.sweep->start);
    line("stop", s.sweep->stop);
    out << "points = " << s.sweep->points << '\n';
    out << "spacing = " << (s.sweep->spacing == Spacing::Log ? "log" : "linear") << '\n';
  }
  if (s.series) {
    out << "\n[series]\nvariable = " << s.series->variable << "\nvalues = ";
    for (std::size_t i = 0; i < s.series->values.size(); ++i) {
      out << (i ? ", " : "") << format_exact(s.series->values[i]);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace expcli
