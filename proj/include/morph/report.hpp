#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "morph/model.hpp"
#include "morph/synthesis.hpp"

namespace morph {

struct GroupPriorities {
  NodeId group;
  std::vector<std::pair<DaId, int>> priorities;  // DA order of the group
};

struct FrontEntry {
  std::string name;
  std::vector<DaId> selection;
  QualityVector quality;
  std::map<NodeId, DaId> leaf_profile;
};

struct NodeFront {
  NodeId node;
  std::uint64_t space = 0;
  std::uint64_t admissible = 0;
  std::vector<FrontEntry> entries;
};

struct AggregationOutcome {
  std::string strategy;                // extend | compress | median
  std::string method;                  // greedy | exact; empty for median
  std::optional<double> budget;        // absent = unconstrained
  bool feasible = true;
  std::map<NodeId, DaId> profile;      // empty when infeasible
  double cost = 0;
  double profit = 0;
  std::string median_name;             // median only
  double median_objective = 0;
};

struct RunReport {
  std::string command;
  std::string model_path;

  // config echo
  std::string priorities_mode;  // "file" | "rank"
  double concordance_min = 0.5;
  double discordance_max = 1.0;
  int propagate_layers = 1;
  std::string mcp_method;  // "greedy" | "exact"
  std::string strategy;    // "extend" | "compress" | "median"
  std::vector<double> budgets;

  ValidationReport validation;

  bool has_summary = false;
  std::uint64_t groups = 0;
  std::uint64_t alternatives = 0;
  std::uint64_t design_space = 0;
  std::vector<NodeId> leaf_order;  // groups in model order, for rendering

  std::vector<GroupPriorities> priorities;
  std::vector<NodeFront> fronts;
  std::vector<FrontEntry> solutions;

  bool has_aggregation = false;
  std::map<NodeId, std::vector<DaId>> kernel;
  std::map<NodeId, std::vector<DaId>> superstructure;
  std::vector<AggregationOutcome> outcomes;

  // Wall-clock time; kept out of both rendered formats so that identical
  // inputs produce identical bytes.
  std::int64_t elapsed_ms = 0;
};

enum class ReportFormat { text, machine };

std::string render_report(const RunReport& report, ReportFormat format);

}  // namespace morph
