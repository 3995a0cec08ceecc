#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "morph/model.hpp"
#include "morph/synthesis.hpp"

namespace morph {

/// Per-group choice sets. A concrete solution holds a singleton per group; a
/// kernel may hold empty sets and a superstructure multi-valued ones. The
/// DA lists are kept sorted and duplicate-free.
struct SelectionProfile {
  std::map<NodeId, std::vector<DaId>> choices;

  bool single_valued() const;

  friend bool operator==(const SelectionProfile&,
                         const SelectionProfile&) = default;
};

SelectionProfile to_profile(const CompositeSolution& solution);

/// Per-group intersection of the given profiles (the substructure).
SelectionProfile kernel(const std::vector<SelectionProfile>& solutions);

/// Per-group union of the given profiles.
SelectionProfile superstructure(const std::vector<SelectionProfile>& solutions);

struct CostProfit {
  double cost = 0;
  double profit = 0;

  friend bool operator==(const CostProfit&, const CostProfit&) = default;
};

using AggregationTable = std::map<DaId, CostProfit>;

struct McpItem {
  int group = 0;  // 1-based group index
  int index = 0;  // 1-based index within the group
  DaId da;
  double cost = 0;  // nonnegative
  double profit = 0;
};

/// Multiple-choice knapsack: pick exactly one item per group, maximize total
/// profit subject to total cost <= budget.
struct McpInstance {
  std::vector<std::vector<McpItem>> groups;
  double budget = 0;
};

enum class McpMethod { greedy, exact };

struct McpSolution {
  std::vector<McpItem> picks;  // one per group, group order
  double total_cost = 0;
  double total_profit = 0;
  McpMethod method = McpMethod::greedy;
};

/// Start from each group's cheapest item (ties: higher profit, then lower
/// index), then repeatedly apply the budget-feasible single swap to a
/// costlier in-group item with the best profit-gain/cost-gain ratio (ties:
/// larger gain, then lower group index, then lower item index) until no
/// profitable swap fits. Throws Errc::infeasible when even the cheapest
/// picks exceed the budget.
McpSolution mcp_greedy(const McpInstance& inst);

/// Exact dynamic program over budget x groups. Costs must be decimals with
/// at most three fractional digits (they are scaled to integers). Among
/// optima returns the lexicographically smallest item indices.
McpSolution mcp_exact(const McpInstance& inst);

struct ExtendResult {
  SelectionProfile profile;  // kernel plus the selected extensions
  double mcp_cost = 0;       // spent on the extension items
  double mcp_profit = 0;
};

/// Fills the open groups of `kern` (groups with an empty choice set) by
/// solving a multiple-choice knapsack over the superstructure candidates of
/// those groups, and returns the completed single-valued profile. Group
/// order follows the model's leaf order; costs/profits come from `table`.
ExtendResult extend_kernel(const SystemModel& model,
                           const SelectionProfile& kern,
                           const SelectionProfile& super,
                           const AggregationTable& table, double budget,
                           McpMethod method);

enum class CompressLimit { deleted_cost, deleted_count };

struct CompressResult {
  SelectionProfile profile;
  double deleted_cost = 0;
  double deleted_profit = 0;
};

/// From every multi-valued group of the superstructure delete all but one
/// alternative, minimizing the total profit removed subject to a limit on
/// the total deletion cost (or on the number of deletions). Solved by the
/// multiple-choice knapsack core with a negated objective.
CompressResult compress_superstructure(const SystemModel& model,
                                       const SelectionProfile& super,
                                       const AggregationTable& table,
                                       double limit, CompressLimit mode,
                                       McpMethod method);

/// Number of leaf groups where two single-valued profiles differ (Hamming).
/// Throws Errc::shape_mismatch on different group sets or multi-valued
/// input.
int proximity(const SelectionProfile& x, const SelectionProfile& y);

struct LabeledProfile {
  std::string name;
  SelectionProfile profile;
};

struct MedianResult {
  LabeledProfile median;
  double objective = 0;  // sum of proximities to all inputs
};

/// The input solution minimizing the total proximity to all inputs; ties
/// broken by name (natural order).
MedianResult set_median(const std::vector<LabeledProfile>& solutions);

}  // namespace morph
