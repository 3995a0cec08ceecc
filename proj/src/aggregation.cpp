#include "morph/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace morph {

bool SelectionProfile::single_valued() const {
  for (const auto& [group, das] : choices)
    if (das.size() != 1) return false;
  return true;
}

SelectionProfile to_profile(const CompositeSolution& solution) {
  SelectionProfile p;
  for (const auto& [group, da] : solution.leaf_profile)
    p.choices[group] = {da};
  return p;
}

namespace {

std::vector<DaId> sorted_unique(std::vector<DaId> das) {
  std::sort(das.begin(), das.end());
  das.erase(std::unique(das.begin(), das.end()), das.end());
  return das;
}

std::set<NodeId> all_groups(const std::vector<SelectionProfile>& solutions) {
  std::set<NodeId> groups;
  for (const SelectionProfile& s : solutions)
    for (const auto& [group, das] : s.choices) groups.insert(group);
  return groups;
}

}  // namespace

SelectionProfile kernel(const std::vector<SelectionProfile>& solutions) {
  SelectionProfile out;
  for (const NodeId& group : all_groups(solutions)) {
    std::vector<DaId> common;
    bool first = true;
    for (const SelectionProfile& s : solutions) {
      auto it = s.choices.find(group);
      std::vector<DaId> das =
          it == s.choices.end() ? std::vector<DaId>{} : sorted_unique(it->second);
      if (first) {
        common = std::move(das);
        first = false;
      } else {
        std::vector<DaId> next;
        std::set_intersection(common.begin(), common.end(), das.begin(),
                              das.end(), std::back_inserter(next));
        common = std::move(next);
      }
    }
    out.choices[group] = std::move(common);
  }
  return out;
}

SelectionProfile superstructure(
    const std::vector<SelectionProfile>& solutions) {
  SelectionProfile out;
  for (const NodeId& group : all_groups(solutions)) {
    std::vector<DaId> merged;
    for (const SelectionProfile& s : solutions) {
      auto it = s.choices.find(group);
      if (it != s.choices.end())
        merged.insert(merged.end(), it->second.begin(), it->second.end());
    }
    out.choices[group] = sorted_unique(std::move(merged));
  }
  return out;
}

namespace {

void check_instance(const McpInstance& inst) {
  if (inst.groups.empty())
    throw Error(Errc::shape_mismatch, "knapsack instance has no groups");
  for (const auto& group : inst.groups) {
    if (group.empty())
      throw Error(Errc::shape_mismatch, "knapsack instance has an empty group");
    for (const McpItem& item : group)
      if (item.cost < 0)
        throw Error(Errc::shape_mismatch,
                    "negative cost on item '" + item.da + "'");
  }
}

double min_cost_total(const McpInstance& inst) {
  double total = 0;
  for (const auto& group : inst.groups) {
    double lo = std::numeric_limits<double>::infinity();
    for (const McpItem& item : group) lo = std::min(lo, item.cost);
    total += lo;
  }
  return total;
}

void require_feasible(const McpInstance& inst) {
  const double lo = min_cost_total(inst);
  if (lo > inst.budget)
    throw Error(Errc::infeasible,
                "cheapest picks cost " + std::to_string(lo) +
                    ", over the budget of " + std::to_string(inst.budget));
}

}  // namespace

McpSolution mcp_greedy(const McpInstance& inst) {
  check_instance(inst);
  require_feasible(inst);

  McpSolution sol;
  sol.method = McpMethod::greedy;
  std::vector<std::size_t> current(inst.groups.size());
  for (std::size_t g = 0; g < inst.groups.size(); ++g) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < inst.groups[g].size(); ++j) {
      const McpItem& a = inst.groups[g][j];
      const McpItem& b = inst.groups[g][best];
      if (a.cost < b.cost || (a.cost == b.cost && a.profit > b.profit))
        best = j;
    }
    current[g] = best;
    sol.total_cost += inst.groups[g][best].cost;
    sol.total_profit += inst.groups[g][best].profit;
  }

  // Best-ratio single swaps to costlier in-group items while they fit.
  while (true) {
    double best_ratio = 0, best_gain = 0;
    std::size_t best_g = 0, best_j = 0;
    bool found = false;
    for (std::size_t g = 0; g < inst.groups.size(); ++g) {
      const McpItem& cur = inst.groups[g][current[g]];
      for (std::size_t j = 0; j < inst.groups[g].size(); ++j) {
        if (j == current[g]) continue;
        const McpItem& cand = inst.groups[g][j];
        const double extra_cost = cand.cost - cur.cost;
        const double gain = cand.profit - cur.profit;
        if (extra_cost <= 0 || gain <= 0) continue;
        if (sol.total_cost + extra_cost > inst.budget) continue;
        const double ratio = gain / extra_cost;
        const bool better =
            !found || ratio > best_ratio ||
            (ratio == best_ratio &&
             (gain > best_gain ||
              (gain == best_gain &&
               (g < best_g || (g == best_g && j < best_j)))));
        if (better) {
          found = true;
          best_ratio = ratio;
          best_gain = gain;
          best_g = g;
          best_j = j;
        }
      }
    }
    if (!found) break;
    const McpItem& cur = inst.groups[best_g][current[best_g]];
    const McpItem& next = inst.groups[best_g][best_j];
    sol.total_cost += next.cost - cur.cost;
    sol.total_profit += next.profit - cur.profit;
    current[best_g] = best_j;
  }

  for (std::size_t g = 0; g < inst.groups.size(); ++g)
    sol.picks.push_back(inst.groups[g][current[g]]);
  return sol;
}

namespace {

// Smallest power of ten (up to 10^3) that maps every cost to an integer.
long long cost_scale(const McpInstance& inst) {
  const double eps = 1e-6;
  long long scale = 1;
  for (int d = 0; d <= 3; ++d, scale *= 10) {
    bool ok = true;
    for (const auto& group : inst.groups)
      for (const McpItem& item : group) {
        const double scaled = item.cost * static_cast<double>(scale);
        if (std::abs(scaled - std::llround(scaled)) > eps) {
          ok = false;
          break;
        }
      }
    if (ok) return scale;
  }
  throw Error(Errc::cost_precision,
              "costs need more than three decimal digits");
}

}  // namespace

McpSolution mcp_exact(const McpInstance& inst) {
  check_instance(inst);
  require_feasible(inst);

  const long long scale = cost_scale(inst);
  const int n_groups = static_cast<int>(inst.groups.size());
  std::vector<std::vector<long long>> icost(n_groups);
  long long max_spend = 0;
  for (int g = 0; g < n_groups; ++g) {
    long long hi = 0;
    for (const McpItem& item : inst.groups[g]) {
      icost[g].push_back(std::llround(item.cost * static_cast<double>(scale)));
      hi = std::max(hi, icost[g].back());
    }
    max_spend += hi;
  }
  // An effectively unlimited budget is clamped to the total of the dearest
  // items; that also keeps the scaled budget within integer range.
  long long capacity = max_spend;
  const double scaled_budget = inst.budget * static_cast<double>(scale);
  if (scaled_budget < static_cast<double>(max_spend))
    capacity = static_cast<long long>(std::floor(scaled_budget + 1e-9));

  constexpr double kImpossible = -std::numeric_limits<double>::infinity();

  // dp[g][c]: best profit from groups g.. within remaining capacity c.
  std::vector<std::vector<double>> dp(
      n_groups + 1, std::vector<double>(capacity + 1, kImpossible));
  std::fill(dp[n_groups].begin(), dp[n_groups].end(), 0.0);
  for (int g = n_groups - 1; g >= 0; --g)
    for (long long c = 0; c <= capacity; ++c) {
      double best = kImpossible;
      for (std::size_t j = 0; j < inst.groups[g].size(); ++j) {
        if (icost[g][j] > c) continue;
        const double below = dp[g + 1][c - icost[g][j]];
        if (below == kImpossible) continue;
        best = std::max(best, inst.groups[g][j].profit + below);
      }
      dp[g][c] = best;
    }
  if (dp[0][capacity] == kImpossible)
    throw Error(Errc::infeasible, "no feasible pick within the budget");

  McpSolution sol;
  sol.method = McpMethod::exact;
  long long c = capacity;
  double target = dp[0][capacity];
  for (int g = 0; g < n_groups; ++g) {
    for (std::size_t j = 0; j < inst.groups[g].size(); ++j) {
      if (icost[g][j] > c) continue;
      const double below = dp[g + 1][c - icost[g][j]];
      if (below == kImpossible) continue;
      if (inst.groups[g][j].profit + below == target) {
        sol.picks.push_back(inst.groups[g][j]);
        sol.total_cost += inst.groups[g][j].cost;
        sol.total_profit += inst.groups[g][j].profit;
        c -= icost[g][j];
        target = below;
        break;
      }
    }
  }
  return sol;
}

namespace {

McpSolution solve_mcp(const McpInstance& inst, McpMethod method) {
  return method == McpMethod::greedy ? mcp_greedy(inst) : mcp_exact(inst);
}

CostProfit estimate_for(const AggregationTable& table, const DaId& da) {
  auto it = table.find(da);
  if (it == table.end())
    throw Error(Errc::missing_estimate,
                "no cost/profit estimate for alternative '" + da + "'");
  return it->second;
}

std::vector<DaId> group_choices(const SelectionProfile& p,
                                const NodeId& group) {
  auto it = p.choices.find(group);
  return it == p.choices.end() ? std::vector<DaId>{}
                               : sorted_unique(it->second);
}

}  // namespace

ExtendResult extend_kernel(const SystemModel& model,
                           const SelectionProfile& kern,
                           const SelectionProfile& super,
                           const AggregationTable& table, double budget,
                           McpMethod method) {
  ExtendResult result;
  SelectionProfile& out = result.profile;
  McpInstance inst;
  inst.budget = budget;
  std::vector<NodeId> open_groups;

  for (const NodeId& group : leaf_groups_preorder(model)) {
    const std::vector<DaId> fixed = group_choices(kern, group);
    const std::vector<DaId> candidates = group_choices(super, group);
    for (const DaId& da : fixed)
      if (std::find(candidates.begin(), candidates.end(), da) ==
          candidates.end())
        throw Error(Errc::shape_mismatch,
                    "kernel choice '" + da +
                        "' is outside the superstructure of group '" + group +
                        "'");
    if (fixed.size() > 1)
      throw Error(Errc::shape_mismatch,
                  "kernel holds several alternatives for group '" + group +
                      "'");
    if (!fixed.empty()) {
      out.choices[group] = fixed;
      continue;
    }
    if (candidates.empty())
      throw Error(Errc::missing_estimate,
                  "open group '" + group + "' has no candidates");
    open_groups.push_back(group);
    auto& items = inst.groups.emplace_back();
    for (const DaId& da : candidates) {
      const CostProfit cp = estimate_for(table, da);
      items.push_back({static_cast<int>(inst.groups.size()),
                       static_cast<int>(items.size() + 1), da, cp.cost,
                       cp.profit});
    }
  }

  if (open_groups.empty()) return result;

  const McpSolution sol = solve_mcp(inst, method);
  for (std::size_t g = 0; g < open_groups.size(); ++g)
    out.choices[open_groups[g]] = {sol.picks[g].da};
  result.mcp_cost = sol.total_cost;
  result.mcp_profit = sol.total_profit;
  return result;
}

CompressResult compress_superstructure(const SystemModel& model,
                                       const SelectionProfile& super,
                                       const AggregationTable& table,
                                       double limit, CompressLimit mode,
                                       McpMethod method) {
  CompressResult result;
  McpInstance inst;
  inst.budget = limit;
  std::vector<NodeId> open_groups;

  for (const NodeId& group : leaf_groups_preorder(model)) {
    const std::vector<DaId> candidates = group_choices(super, group);
    if (candidates.size() <= 1) {
      result.profile.choices[group] = candidates;
      continue;
    }
    // One knapsack item per keep-choice: its cost/profit are the totals that
    // get deleted when everything else in the group is dropped.
    double cost_sum = 0, profit_sum = 0;
    std::size_t deletions = candidates.size() - 1;
    for (const DaId& da : candidates) {
      const CostProfit cp = estimate_for(table, da);
      cost_sum += cp.cost;
      profit_sum += cp.profit;
    }
    open_groups.push_back(group);
    auto& items = inst.groups.emplace_back();
    for (const DaId& da : candidates) {
      const CostProfit cp = estimate_for(table, da);
      const double deleted_cost = mode == CompressLimit::deleted_cost
                                      ? cost_sum - cp.cost
                                      : static_cast<double>(deletions);
      items.push_back({static_cast<int>(inst.groups.size()),
                       static_cast<int>(items.size() + 1), da, deleted_cost,
                       -(profit_sum - cp.profit)});
    }
  }

  if (open_groups.empty()) return result;

  const McpSolution sol = solve_mcp(inst, method);
  for (std::size_t g = 0; g < open_groups.size(); ++g) {
    result.profile.choices[open_groups[g]] = {sol.picks[g].da};
    result.deleted_cost += sol.picks[g].cost;
    result.deleted_profit += -sol.picks[g].profit;
  }
  return result;
}

int proximity(const SelectionProfile& x, const SelectionProfile& y) {
  if (!x.single_valued() || !y.single_valued())
    throw Error(Errc::shape_mismatch,
                "proximity requires single-valued profiles");
  auto ix = x.choices.begin();
  auto iy = y.choices.begin();
  int distance = 0;
  for (; ix != x.choices.end() && iy != y.choices.end(); ++ix, ++iy) {
    if (ix->first != iy->first)
      throw Error(Errc::shape_mismatch,
                  "profiles cover different groups: '" + ix->first +
                      "' vs '" + iy->first + "'");
    if (ix->second != iy->second) ++distance;
  }
  if (ix != x.choices.end() || iy != y.choices.end())
    throw Error(Errc::shape_mismatch, "profiles cover different group counts");
  return distance;
}

MedianResult set_median(const std::vector<LabeledProfile>& solutions) {
  if (solutions.empty())
    throw Error(Errc::shape_mismatch, "set median of an empty solution set");
  std::size_t best = 0;
  double best_objective = 0;
  for (std::size_t i = 0; i < solutions.size(); ++i) {
    double objective = 0;
    for (const LabeledProfile& other : solutions)
      objective += proximity(solutions[i].profile, other.profile);
    if (i == 0 || objective < best_objective ||
        (objective == best_objective &&
         natural_less(solutions[i].name, solutions[best].name))) {
      best = i;
      best_objective = objective;
    }
  }
  return {solutions[best], best_objective};
}

}  // namespace morph
