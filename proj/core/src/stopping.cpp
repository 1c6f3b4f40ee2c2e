#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "hatk/analysis.hpp"
#include "hatk/error.hpp"
#include "json.hpp"

namespace hatk {

namespace {

int distance_bucket(const DyadicInterval& I, const std::vector<double>& outside, double L) {
  double best = std::numeric_limits<double>::infinity();
  for (double x : outside) {
    best = std::min(best, periodic_interval_distance(I, x, L));
    if (best == 0.0) break;
  }
  return static_cast<int>(std::floor(std::log2(1.0 + best / I.length())));
}

// One single-set stopping time over a stock, appending selections.
void run_stopping(const std::vector<DyadicInterval>& stock, const AverageTable& table, int d, int set,
                  const DyadicInterval& I0, std::vector<StoppingSelection>& out) {
  if (stock.empty()) return;
  auto universe = collection_plus(stock, std::nullopt, I0.scale);
  double top = 0.0;
  for (const auto& J : universe) top = std::max(top, table.average(J));
  if (!(top > 0.0)) throw ConsistencyError("stopping time on a null set");
  int n = static_cast<int>(std::floor(-std::log2(top)));
  while (std::ldexp(1.0, -n) < top) --n;

  std::vector<DyadicInterval> remaining = stock;
  for (int guard = 0; !remaining.empty(); ++n, ++guard) {
    if (guard > 4000) throw ConsistencyError("stopping time failed to exhaust its stock");
    double lo = std::ldexp(1.0, -n - 1);
    double hi = std::ldexp(1.0, -n);
    std::vector<StoppingSelection> accepted;
    for (const auto& J : collection_plus(remaining, std::nullopt, I0.scale)) {
      bool covered = std::any_of(accepted.begin(), accepted.end(),
                                 [&](const StoppingSelection& a) { return a.interval.contains(J); });
      if (covered) continue;
      double avg = table.average(J);
      if (avg >= lo && avg <= hi) accepted.push_back({d, set, n, J, avg, {}});
    }
    if (accepted.empty()) continue;
    std::vector<DyadicInterval> keep;
    for (const auto& I : remaining) {
      auto it = std::find_if(accepted.begin(), accepted.end(),
                             [&](const StoppingSelection& a) { return a.interval.contains(I); });
      if (it == accepted.end())
        keep.push_back(I);
      else
        it->members.push_back(I);
    }
    remaining.swap(keep);
    for (auto& a : accepted) out.push_back(std::move(a));
  }
}

nlohmann::ordered_json interval_json(const DyadicInterval& I) { return {I.scale, I.position}; }

nlohmann::ordered_json members_json(const std::vector<DyadicInterval>& v) {
  auto a = nlohmann::ordered_json::array();
  for (const auto& I : v) a.push_back(interval_json(I));
  return a;
}

}  // namespace

StoppingForest stopping_decompose(const std::vector<DyadicInterval>& family, const MeasurableSet& E1,
                                  const MeasurableSet& E2, const MeasurableSet& E3,
                                  const DyadicInterval& I0, double C, int decay) {
  const SampleGrid& g = E3.grid();
  if (g.dimension() != 1) throw ShapeError("stopping time runs on 1D grids");
  if (!(E1.grid() == g) || !(E2.grid() == g)) throw ShapeError("sets on different grids");
  if (!(E1.measure() > 0.0) || !(E2.measure() > 0.0)) throw DomainError("E1 and E2 must be nonempty");
  for (const auto& I : family)
    if (!I0.contains(I)) throw DomainError("interval " + I.to_string() + " is not inside I0");

  GridFunction chi0 = adapted_bump_samples(g, {I0, decay});
  ExceptionalSet ex = exceptional_set(E3, {{E1.indicator(), chi0}, {E2.indicator(), chi0}}, C);

  StoppingForest forest;
  forest.I0 = I0;
  forest.C = C;
  forest.decay = decay;
  forest.e3_tilde_measure = ex.e_tilde.measure();
  forest.e3_ratio = ex.ratio;
  const GridFunction* sets[3] = {&E1.indicator(), &E2.indicator(), &ex.e_tilde.indicator()};
  for (int j = 0; j < 3; ++j) forest.mass[j] = lp_norm(*sets[j] * chi0, 1.0);
  if (family.empty()) return forest;

  std::vector<double> outside;
  for (std::size_t i = 0; i < g.samples(); ++i)
    if (!ex.omega.contains(i)) outside.push_back(g.coordinate(i));
  for (const auto& I : family) forest.buckets[distance_bucket(I, outside, g.period())].push_back(I);

  std::vector<AverageTable> tables;
  for (const auto* s : sets) tables.emplace_back(*s, decay);

  for (const auto& [d, stock] : forest.buckets) {
    std::size_t first = forest.selections.size();
    for (int j = 0; j < 3; ++j) run_stopping(stock, tables[static_cast<std::size_t>(j)], d, j + 1, I0,
                                             forest.selections);

    // Each member sits in exactly one selection per set; the three are nested around it.
    using Key = std::tuple<int, int, int, DyadicInterval>;
    std::map<Key, std::vector<DyadicInterval>> cells;
    std::vector<const StoppingSelection*> owner(3);
    std::vector<DyadicInterval> seen;
    for (const auto& I : stock) {
      if (std::find(seen.begin(), seen.end(), I) != seen.end()) continue;  // duplicates travel together
      seen.push_back(I);
      for (std::size_t s = first; s < forest.selections.size(); ++s) {
        const auto& sel = forest.selections[s];
        if (std::find(sel.members.begin(), sel.members.end(), I) != sel.members.end())
          owner[static_cast<std::size_t>(sel.set - 1)] = &sel;
      }
      DyadicInterval K = owner[0]->interval;
      for (int j = 1; j < 3; ++j)
        if (owner[static_cast<std::size_t>(j)]->interval.scale > K.scale) K = owner[static_cast<std::size_t>(j)]->interval;
      auto& bucket = cells[{owner[0]->level, owner[1]->level, owner[2]->level, K}];
      for (const auto& J : stock)
        if (J == I) bucket.push_back(J);
    }
    for (auto& [key, members] : cells) {
      auto [n1, n2, n3, K] = key;
      forest.cells.push_back({d, n1, n2, n3, K, std::move(members)});
    }
  }
  return forest;
}

std::string StoppingForest::to_json() const {
  nlohmann::ordered_json j;
  j["I0"] = interval_json(I0);
  j["C"] = C;
  j["decay"] = decay;
  j["e3_tilde_measure"] = e3_tilde_measure;
  j["e3_ratio"] = e3_ratio;
  j["mass"] = {mass[0], mass[1], mass[2]};
  auto b = nlohmann::ordered_json::array();
  for (const auto& [d, v] : buckets) b.push_back({{"d", d}, {"members", members_json(v)}});
  j["buckets"] = b;
  auto s = nlohmann::ordered_json::array();
  for (const auto& sel : selections)
    s.push_back({{"d", sel.d},
                 {"set", sel.set},
                 {"n", sel.level},
                 {"interval", interval_json(sel.interval)},
                 {"average", sel.average},
                 {"members", members_json(sel.members)}});
  j["selections"] = s;
  auto c = nlohmann::ordered_json::array();
  for (const auto& cell : cells)
    c.push_back({{"d", cell.d},
                 {"n", {cell.n1, cell.n2, cell.n3}},
                 {"K", interval_json(cell.K)},
                 {"members", members_json(cell.members)}});
  j["cells"] = c;
  return j.dump(2);
}

}  // namespace hatk
