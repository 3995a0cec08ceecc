#include "morph/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace morph {

std::vector<CriterionId> EstimateTable::active_criteria() const {
  std::vector<CriterionId> active;
  for (const CriterionSpec& spec : criteria) {
    bool complete = true;
    for (const DaId& da : das)
      if (!values.count({da, spec.id})) {
        complete = false;
        break;
      }
    if (complete) active.push_back(spec.id);
  }
  return active;
}

namespace {

// Active criteria of a table, resolved to specs plus per-criterion value
// range over the group.
struct ActiveView {
  std::vector<const CriterionSpec*> specs;
  std::vector<double> ranges;
  double total_weight = 0;

  explicit ActiveView(const EstimateTable& table) {
    const auto active = table.active_criteria();
    for (const CriterionId& id : active) {
      const CriterionSpec* spec = nullptr;
      for (const CriterionSpec& s : table.criteria)
        if (s.id == id) spec = &s;
      specs.push_back(spec);
      double lo = std::numeric_limits<double>::infinity();
      double hi = -std::numeric_limits<double>::infinity();
      for (const DaId& da : table.das) {
        const double v = table.values.at({da, id});
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      ranges.push_back(hi - lo);
      total_weight += std::abs(spec->weight);
    }
    if (specs.empty())
      throw Error(Errc::no_active_criteria,
                  "group '" + table.group +
                      "' has no criterion valued for every alternative");
  }
};

}  // namespace

double concordance(const EstimateTable& table, const DaId& a, const DaId& b) {
  const ActiveView view(table);
  double agreeing = 0;
  for (const CriterionSpec* spec : view.specs) {
    const double va = table.values.at({a, spec->id});
    const double vb = table.values.at({b, spec->id});
    const bool at_least_as_good = spec->weight > 0 ? va >= vb : va <= vb;
    if (at_least_as_good) agreeing += std::abs(spec->weight);
  }
  return agreeing / view.total_weight;
}

double discordance(const EstimateTable& table, const DaId& a, const DaId& b) {
  const ActiveView view(table);
  double worst = 0;
  for (std::size_t i = 0; i < view.specs.size(); ++i) {
    const CriterionSpec* spec = view.specs[i];
    const double va = table.values.at({a, spec->id});
    const double vb = table.values.at({b, spec->id});
    const double margin = spec->weight > 0 ? vb - va : va - vb;
    if (margin <= 0 || view.ranges[i] == 0) continue;
    worst = std::max(worst, margin / view.ranges[i]);
  }
  return worst;
}

OutrankingGraph outranking_graph(const EstimateTable& table, Thresholds t) {
  OutrankingGraph g;
  g.vertices = table.das;
  for (const DaId& a : table.das)
    for (const DaId& b : table.das) {
      if (a == b) continue;
      if (concordance(table, a, b) >= t.concordance_min &&
          discordance(table, a, b) <= t.discordance_max)
        g.arcs.insert({a, b});
    }
  return g;
}

std::map<DaId, int> rank_layers(const OutrankingGraph& g, int k) {
  const std::size_t n = g.vertices.size();
  std::map<DaId, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index.emplace(g.vertices[i], i);

  std::vector<std::vector<std::size_t>> adj(n), radj(n);
  for (const auto& [a, b] : g.arcs) {
    adj[index.at(a)].push_back(index.at(b));
    radj[index.at(b)].push_back(index.at(a));
  }

  // Kosaraju condensation.
  std::vector<std::size_t> order;
  std::vector<char> seen(n, 0);
  std::function<void(std::size_t)> forward = [&](std::size_t v) {
    seen[v] = 1;
    for (std::size_t u : adj[v])
      if (!seen[u]) forward(u);
    order.push_back(v);
  };
  for (std::size_t v = 0; v < n; ++v)
    if (!seen[v]) forward(v);

  std::vector<int> comp(n, -1);
  int ncomp = 0;
  std::function<void(std::size_t, int)> backward = [&](std::size_t v, int c) {
    comp[v] = c;
    for (std::size_t u : radj[v])
      if (comp[u] < 0) backward(u, c);
  };
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    if (comp[*it] < 0) backward(*it, ncomp++);

  std::vector<std::set<int>> comp_radj(ncomp);
  for (const auto& [a, b] : g.arcs) {
    const int ca = comp[index.at(a)], cb = comp[index.at(b)];
    if (ca != cb) comp_radj[cb].insert(ca);
  }

  // Peel source layers off the condensation.
  std::vector<int> layer(ncomp, 0);
  std::set<int> remaining;
  for (int c = 0; c < ncomp; ++c) remaining.insert(c);
  for (int current = 1; !remaining.empty(); ++current) {
    std::vector<int> sources;
    for (int c : remaining) {
      bool has_incoming = false;
      for (int p : comp_radj[c])
        if (remaining.count(p)) {
          has_incoming = true;
          break;
        }
      if (!has_incoming) sources.push_back(c);
    }
    for (int c : sources) {
      layer[c] = current;
      remaining.erase(c);
    }
  }

  std::map<DaId, int> priorities;
  for (std::size_t v = 0; v < n; ++v)
    priorities[g.vertices[v]] = std::min(layer[comp[v]], k);
  return priorities;
}

std::map<DaId, int> rank_group(const EstimateTable& table, Thresholds t,
                               int k) {
  return rank_layers(outranking_graph(table, t), k);
}

}  // namespace morph
