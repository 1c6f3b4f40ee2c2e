#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "hatk/bench.hpp"
#include "hatk/error.hpp"

namespace hatk::bench {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* growth_name(GrowthPolicy g) {
  switch (g) {
    case GrowthPolicy::none: return "none";
    case GrowthPolicy::bounded: return "bounded";
    case GrowthPolicy::polylog: return "polylog";
    case GrowthPolicy::ignore: return "ignore";
  }
  return "ignore";
}

// JSON has no infinities; non-finite ratios are written as strings.
nlohmann::ordered_json jnum(double v) {
  if (std::isfinite(v)) return v;
  return num(v);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace

std::string report_csv(const TrialReport& report) {
  std::string s = "target,trial,seed,samples,param,epsilon,lhs,rhs,ratio\n";
  for (const auto& r : report.rows) {
    s += r.target + "," + std::to_string(r.trial) + "," + std::to_string(r.seed) + "," + std::to_string(r.samples) +
         "," + num(r.param) + "," + num(r.epsilon) + "," + num(r.lhs) + "," + num(r.rhs) + "," + num(r.ratio) + "\n";
  }
  return s;
}

std::string report_json(const TrialReport& report) {
  nlohmann::ordered_json j;
  j["passed"] = report.passed();
  auto& targets = j["targets"] = nlohmann::ordered_json::array();
  for (const auto& t : report.targets) {
    nlohmann::ordered_json by = nlohmann::ordered_json::array();
    for (const auto& [p, m] : t.aggregate.max_by_param) by.push_back({{"param", p}, {"max_ratio", jnum(m)}});
    targets.push_back({{"id", t.id},
                       {"param_name", t.param_name},
                       {"policy", {{"cap", t.policy.cap}, {"growth", growth_name(t.policy.growth)}, {"tolerance", t.policy.tolerance}}},
                       {"rows", t.aggregate.rows},
                       {"max_ratio", jnum(t.aggregate.max_ratio)},
                       {"median_ratio", jnum(t.aggregate.median_ratio)},
                       {"growth", jnum(t.aggregate.growth)},
                       {"max_by_param", by},
                       {"passed", t.passed},
                       {"error", t.error}});
  }
  auto& rows = j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"target", r.target},
                    {"trial", r.trial},
                    {"seed", r.seed},
                    {"samples", r.samples},
                    {"param", r.param},
                    {"epsilon", r.epsilon},
                    {"lhs", jnum(r.lhs)},
                    {"rhs", jnum(r.rhs)},
                    {"ratio", jnum(r.ratio)}});
  }
  return j.dump(2) + "\n";
}

std::string report_plotdata(const TrialReport& report) {
  std::string s;
  bool first = true;
  for (const auto& t : report.targets) {
    if (!first) s += "\n";
    first = false;
    s += "# target " + t.id + " param " + (t.param_name.empty() ? "none" : t.param_name) + "\n";
    s += "param\tepsilon\tratio\n";
    for (const auto& r : report.rows)
      if (r.target == t.id) s += num(r.param) + "\t" + num(r.epsilon) + "\t" + num(r.ratio) + "\n";
  }
  return s;
}

std::vector<TrialRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "target,trial,seed,samples,param,epsilon,lhs,rhs,ratio")
    throw ParseError("unexpected CSV header");
  std::vector<TrialRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 9) throw ParseError("CSV row with " + std::to_string(f.size()) + " fields");
    try {
      rows.push_back({f[0], std::stoi(f[1]), std::stoull(f[2]), std::stoull(f[3]), std::stod(f[4]), std::stod(f[5]),
                      std::stod(f[6]), std::stod(f[7]), std::stod(f[8])});
    } catch (const std::logic_error&) {
      throw ParseError("bad CSV row '" + line + "'");
    }
  }
  return rows;
}

void emit_report(const TrialReport& report, const std::string& format, const std::string& prefix) {
  if (format == "csv")
    write_file(prefix + ".csv", report_csv(report));
  else if (format == "json")
    write_file(prefix + ".json", report_json(report));
  else if (format == "plotdata")
    write_file(prefix + ".plot.tsv", report_plotdata(report));
  else
    throw DomainError("unknown report format '" + format + "'");
}

}  // namespace hatk::bench
