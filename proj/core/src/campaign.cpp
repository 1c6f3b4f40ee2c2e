#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "hatk/bench.hpp"
#include "hatk/error.hpp"

namespace hatk::bench {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!trim(item).empty()) out.push_back(trim(item));
  return out;
}

double to_number(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw ParseError("bad number '" + v + "' for key '" + key + "'");
}

std::vector<double> numbers(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& s : split_list(v)) out.push_back(to_number(key, s));
  return out;
}

// Least-squares slope of y against x.
double slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() < 2) return 0.0;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

struct Job {
  std::size_t target;  // index into the campaign's target list
  TrialContext ctx;
};

}  // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    if (key == "seed") {
      c.seed = std::stoull(val);
    } else if (key == "grid") {
      c.grid_sizes.clear();
      for (double d : numbers(key, val)) c.grid_sizes.push_back(static_cast<std::size_t>(d));
    } else if (key == "grid2d") {
      c.grid2d = static_cast<std::size_t>(to_number(key, val));
    } else if (key == "trials") {
      c.trials = static_cast<int>(to_number(key, val));
    } else if (key == "targets") {
      c.targets.clear();
      if (val == "all")
        for (const auto& t : target_registry()) c.targets.push_back(t.id);
      else
        c.targets = split_list(val);
    } else if (key == "epsilon") {
      c.epsilons = numbers(key, val);
    } else if (key.rfind("sweep.", 0) == 0) {
      c.sweeps[key.substr(6)] = numbers(key, val);
    } else if (key.rfind("cap.", 0) == 0) {
      c.caps[key.substr(4)] = to_number(key, val);
    } else if (key.rfind("tolerance.", 0) == 0) {
      c.tolerances[key.substr(10)] = to_number(key, val);
    } else if (key == "output") {
      c.output = val;
    } else if (key == "formats") {
      c.formats = split_list(val);
    } else {
      throw ParseError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  if (c.trials < 0) throw ParseError("trials must be nonnegative");
  for (const auto& id : c.targets) find_target(id);
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

bool TrialReport::passed() const {
  return std::all_of(targets.begin(), targets.end(), [](const TargetSummary& t) { return t.passed; });
}

Aggregate aggregate_rows(const std::vector<TrialRow>& rows, GrowthPolicy growth) {
  Aggregate a;
  a.rows = rows.size();
  if (rows.empty()) return a;
  std::vector<double> ratios;
  std::vector<double> x, y;
  for (const auto& r : rows) {
    ratios.push_back(r.ratio);
    a.max_ratio = std::max(a.max_ratio, r.ratio);
    auto& m = a.max_by_param[r.param];
    m = std::max(m, r.ratio);
    if (r.param > 0.0 && r.ratio > 0.0) {
      if (growth == GrowthPolicy::none || growth == GrowthPolicy::bounded) {
        x.push_back(std::log(r.param));
        y.push_back(std::log(r.ratio));
      } else if (growth == GrowthPolicy::polylog) {
        x.push_back(std::log(std::log1p(r.param)));
        y.push_back(std::log(r.ratio));
      }
    }
  }
  std::sort(ratios.begin(), ratios.end());
  std::size_t n = ratios.size();
  a.median_ratio = n % 2 ? ratios[n / 2] : 0.5 * (ratios[n / 2 - 1] + ratios[n / 2]);
  a.growth = growth == GrowthPolicy::ignore ? 0.0 : slope(x, y);
  return a;
}

unsigned thread_count() {
  const char* env = std::getenv("HATK_THREADS");
  if (!env) return 1;
  long v = std::strtol(env, nullptr, 10);
  return v > 0 ? static_cast<unsigned>(std::min(v, 256L)) : 1;
}

TrialRow rerun_row(const TrialRow& row, std::size_t samples2d) {
  const auto& t = find_target(row.target);
  TrialContext ctx{row.samples, samples2d, row.seed, row.trial, row.param, row.epsilon};
  TrialOutcome o = t.run(ctx);
  TrialRow r = row;
  r.lhs = o.lhs;
  r.rhs = o.rhs;
  r.ratio = o.rhs > 0.0 ? o.lhs / o.rhs : (o.lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  return r;
}

TrialReport run_campaign(const ExperimentConfig& config) {
  std::vector<const InequalityTarget*> targets;
  for (const auto& id : config.targets) targets.push_back(&find_target(id));

  std::vector<Job> jobs;
  for (std::size_t ti = 0; ti < targets.size(); ++ti) {
    const auto& t = *targets[ti];
    auto it = config.sweeps.find(t.id);
    const std::vector<double>& sweep = it != config.sweeps.end() ? it->second : t.default_sweep;
    std::vector<double> eps = t.uses_epsilon ? config.epsilons : std::vector<double>{0.0};
    for (std::size_t n : config.grid_sizes)
      for (double p : sweep)
        for (double e : eps)
          for (int k = 0; k < config.trials; ++k) {
            std::uint64_t seed = derive_seed(config.seed, {fnv1a(t.id), n, fnv1a(std::to_string(p)),
                                                           fnv1a(std::to_string(e)), static_cast<std::uint64_t>(k)});
            jobs.push_back({ti, TrialContext{n, config.grid2d, seed, k, p, e}});
          }
  }

  std::vector<TrialRow> rows(jobs.size());
  std::vector<std::string> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      const Job& job = jobs[j];
      TrialRow row{targets[job.target]->id, job.ctx.trial, job.ctx.seed, job.ctx.samples, job.ctx.param,
                   job.ctx.epsilon, 0.0, 0.0, 0.0};
      try {
        rows[j] = rerun_row(row, config.grid2d);
      } catch (const std::exception& e) {
        errors[j] = e.what();
      }
    }
  };
  unsigned threads = std::min<std::size_t>(thread_count(), std::max<std::size_t>(jobs.size(), 1));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  TrialReport report;
  for (std::size_t ti = 0; ti < targets.size(); ++ti) {
    const auto& t = *targets[ti];
    TargetSummary s;
    s.id = t.id;
    s.param_name = t.param_name;
    s.policy = t.policy;
    if (auto c = config.caps.find(t.id); c != config.caps.end()) s.policy.cap = c->second;
    if (auto c = config.tolerances.find(t.id); c != config.tolerances.end()) s.policy.tolerance = c->second;
    std::vector<TrialRow> mine;
    for (std::size_t j = 0; j < jobs.size(); ++j) {
      if (jobs[j].target != ti) continue;
      if (!errors[j].empty() && s.error.empty()) s.error = errors[j];
      mine.push_back(rows[j]);
    }
    if (!s.error.empty()) mine.clear();  // an evaluator error aborts the whole target
    s.aggregate = aggregate_rows(mine, s.policy.growth);
    bool growth_ok = true;
    if (s.policy.growth == GrowthPolicy::none) growth_ok = std::abs(s.aggregate.growth) <= s.policy.tolerance;
    if (s.policy.growth == GrowthPolicy::bounded || s.policy.growth == GrowthPolicy::polylog) growth_ok = s.aggregate.growth <= s.policy.tolerance;
    s.passed = s.error.empty() && s.aggregate.max_ratio <= s.policy.cap && growth_ok;
    report.rows.insert(report.rows.end(), mine.begin(), mine.end());
    report.targets.push_back(std::move(s));
  }
  return report;
}

}  // namespace hatk::bench
