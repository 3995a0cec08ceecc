#include "morph/pipeline.hpp"

#include <limits>

namespace morph {

namespace {

void echo_config(RunReport& report, const std::string& command,
                 const RunOptions& options) {
  report.command = command;
  report.priorities_mode = options.ranked_priorities ? "rank" : "file";
  report.concordance_min = options.thresholds.concordance_min;
  report.discordance_max = options.thresholds.discordance_max;
  report.propagate_layers = options.propagate_layers;
  report.mcp_method = options.mcp == McpMethod::greedy ? "greedy" : "exact";
  report.strategy = options.strategy;
}

void fill_summary(RunReport& report, const SystemModel& model) {
  report.has_summary = true;
  std::uint64_t alternatives = 0;
  const auto groups = leaf_groups_preorder(model);
  for (const NodeId& gid : groups)
    alternatives += model.nodes.at(gid).alternatives.size();
  report.groups = groups.size();
  report.alternatives = alternatives;
  report.design_space = count_design_space(model);
  report.leaf_order = groups;
}

std::vector<GroupPriorities> file_priorities(const SystemModel& model) {
  std::vector<GroupPriorities> out;
  for (const NodeId& gid : leaf_groups_preorder(model)) {
    GroupPriorities gp;
    gp.group = gid;
    for (const DesignAlternative& da : model.nodes.at(gid).alternatives)
      gp.priorities.emplace_back(da.id, da.priority);
    out.push_back(std::move(gp));
  }
  return out;
}

std::vector<GroupPriorities> computed_priorities(const Problem& problem,
                                                 const RunOptions& options) {
  std::vector<GroupPriorities> out;
  for (const NodeId& gid : leaf_groups_preorder(problem.model)) {
    const EstimateTable table = estimate_table(problem, gid);
    const std::map<DaId, int> ranked =
        rank_group(table, options.thresholds, problem.model.priority_levels);
    GroupPriorities gp;
    gp.group = gid;
    for (const DaId& da : table.das) gp.priorities.emplace_back(da, ranked.at(da));
    out.push_back(std::move(gp));
  }
  return out;
}

SystemModel with_priorities(const SystemModel& model,
                            const std::vector<GroupPriorities>& priorities) {
  SystemModel patched = model;
  for (const GroupPriorities& gp : priorities) {
    Node& node = patched.nodes.at(gp.group);
    for (const auto& [da_id, priority] : gp.priorities)
      for (DesignAlternative& da : node.alternatives)
        if (da.id == da_id) da.priority = priority;
  }
  return patched;
}

FrontEntry to_entry(const CompositeSolution& s) {
  return {s.name, s.selection, s.quality, s.leaf_profile};
}

// Runs ranking (when requested) plus synthesis and fills the report.
// Returns the root solutions of the model that was actually synthesized.
std::vector<CompositeSolution> run_synthesis(RunReport& report,
                                             const Problem& problem,
                                             const RunOptions& options) {
  report.priorities = options.ranked_priorities
                          ? computed_priorities(problem, options)
                          : file_priorities(problem.model);
  const SystemModel model =
      options.ranked_priorities
          ? with_priorities(problem.model, report.priorities)
          : problem.model;

  SynthesisOptions synth_options;
  synth_options.propagate_layers = options.propagate_layers;
  synth_options.flatten_quality = options.flatten_quality;
  const SynthesisResult result = synthesize(model, synth_options);

  for (const NodeSynthesis& ns : result.nodes) {
    NodeFront front;
    front.node = ns.node;
    front.space = ns.space;
    front.admissible = ns.admissible;
    for (const CompositeSolution& s : ns.front)
      front.entries.push_back(to_entry(s));
    report.fronts.push_back(std::move(front));
  }
  for (const CompositeSolution& s : result.root_solutions())
    report.solutions.push_back(to_entry(s));
  return result.root_solutions();
}

void run_aggregation(RunReport& report, const Problem& problem,
                     const RunOptions& options,
                     const std::vector<CompositeSolution>& solutions) {
  report.has_aggregation = true;

  std::vector<SelectionProfile> profiles;
  std::vector<LabeledProfile> labeled;
  for (const CompositeSolution& s : solutions) {
    profiles.push_back(to_profile(s));
    labeled.push_back({s.name, profiles.back()});
  }
  const SelectionProfile kern = kernel(profiles);
  const SelectionProfile super = superstructure(profiles);
  report.kernel = kern.choices;
  report.superstructure = super.choices;

  const AggregationTable empty_table;
  const AggregationTable& table =
      problem.aggregation ? problem.aggregation->estimates : empty_table;

  // Extension budgets come from the flags or, failing that, the model file.
  // Compression limits are a different quantity (deleted cost), so only
  // explicit flags constrain it; median needs no budget at all.
  std::vector<double> budgets = options.budgets;
  if (budgets.empty() && options.strategy == "extend" && problem.aggregation)
    budgets = problem.aggregation->budgets;
  report.budgets = budgets;

  const std::string method_name =
      options.mcp == McpMethod::greedy ? "greedy" : "exact";

  if (options.strategy == "median") {
    const MedianResult median = set_median(labeled);
    AggregationOutcome outcome;
    outcome.strategy = "median";
    outcome.median_name = median.median.name;
    outcome.median_objective = median.objective;
    for (const auto& [group, das] : median.median.profile.choices)
      outcome.profile[group] = das.front();
    report.outcomes.push_back(std::move(outcome));
    return;
  }

  if (options.strategy == "compress") {
    std::vector<std::optional<double>> limits;
    if (budgets.empty())
      limits.push_back(std::nullopt);  // unconstrained
    else
      for (double b : budgets) limits.emplace_back(b);
    for (const auto& limit : limits) {
      AggregationOutcome outcome;
      outcome.strategy = "compress";
      outcome.method = method_name;
      outcome.budget = limit;
      try {
        const CompressResult compressed = compress_superstructure(
            problem.model, super, table,
            limit ? *limit : std::numeric_limits<double>::infinity(),
            options.compress_limit, options.mcp);
        outcome.cost = compressed.deleted_cost;
        outcome.profit = compressed.deleted_profit;
        for (const auto& [group, das] : compressed.profile.choices)
          if (!das.empty()) outcome.profile[group] = das.front();
      } catch (const Error& e) {
        if (e.code() != Errc::infeasible) throw;
        outcome.feasible = false;
      }
      report.outcomes.push_back(std::move(outcome));
    }
    return;
  }

  if (options.strategy != "extend")
    throw Error(Errc::validation_error,
                "unknown aggregation strategy '" + options.strategy + "'");
  if (budgets.empty())
    throw Error(Errc::missing_budget,
                "the extend strategy needs at least one budget");
  for (double budget : budgets) {
    AggregationOutcome outcome;
    outcome.strategy = "extend";
    outcome.method = method_name;
    outcome.budget = budget;
    try {
      const ExtendResult extended =
          extend_kernel(problem.model, kern, super, table, budget, options.mcp);
      outcome.cost = extended.mcp_cost;
      outcome.profit = extended.mcp_profit;
      for (const auto& [group, das] : extended.profile.choices)
        outcome.profile[group] = das.front();
    } catch (const Error& e) {
      if (e.code() != Errc::infeasible) throw;
      outcome.feasible = false;
    }
    report.outcomes.push_back(std::move(outcome));
  }
}

}  // namespace

RunReport cmd_validate(const Problem& problem, const RunOptions& options) {
  RunReport report;
  echo_config(report, "validate", options);
  report.validation = validate_model(problem.model);
  if (report.validation.ok()) fill_summary(report, problem.model);
  return report;
}

RunReport cmd_rank(const Problem& problem, const RunOptions& options) {
  RunReport report;
  echo_config(report, "rank", options);
  report.priorities_mode = "rank";
  fill_summary(report, problem.model);
  RunOptions ranked = options;
  ranked.ranked_priorities = true;
  report.priorities = computed_priorities(problem, ranked);
  return report;
}

RunReport cmd_synth(const Problem& problem, const RunOptions& options) {
  RunReport report;
  echo_config(report, "synth", options);
  fill_summary(report, problem.model);
  run_synthesis(report, problem, options);
  return report;
}

RunReport cmd_aggregate(const Problem& problem, const RunOptions& options) {
  RunReport report;
  echo_config(report, "aggregate", options);
  fill_summary(report, problem.model);
  const auto solutions = run_synthesis(report, problem, options);
  run_aggregation(report, problem, options, solutions);
  return report;
}

RunReport cmd_pipeline(const Problem& problem, const RunOptions& options) {
  RunReport report;
  echo_config(report, "pipeline", options);
  report.validation = validate_model(problem.model);
  fill_summary(report, problem.model);
  const auto solutions = run_synthesis(report, problem, options);
  run_aggregation(report, problem, options, solutions);
  return report;
}

}  // namespace morph
