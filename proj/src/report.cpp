#include "morph/report.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"

namespace morph {

namespace {

using nlohmann::json;

std::string fmt_number(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 1e15)
    return std::to_string(static_cast<long long>(v));
  return json(v).dump();
}

std::string join(const std::vector<std::string>& parts,
                 const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

// Groups in model order when known, otherwise the profile's own order.
std::vector<NodeId> render_order(const RunReport& report,
                                 const std::map<NodeId, DaId>& profile) {
  if (!report.leaf_order.empty()) return report.leaf_order;
  std::vector<NodeId> order;
  for (const auto& [group, da] : profile) order.push_back(group);
  return order;
}

std::string profile_line(const RunReport& report,
                         const std::map<NodeId, DaId>& profile) {
  std::vector<std::string> parts;
  for (const NodeId& group : render_order(report, profile)) {
    auto it = profile.find(group);
    if (it != profile.end()) parts.push_back(it->second);
  }
  return join(parts, "*");
}

std::string render_text(const RunReport& report) {
  std::ostringstream out;
  out << "morph " << report.command;
  if (!report.model_path.empty()) out << " " << report.model_path;
  out << "\n";
  out << "config: priorities=" << report.priorities_mode
      << " p=" << fmt_number(report.concordance_min)
      << " q=" << fmt_number(report.discordance_max)
      << " propagate-layers=" << report.propagate_layers
      << " mcp=" << report.mcp_method << " strategy=" << report.strategy;
  if (!report.budgets.empty()) {
    std::vector<std::string> parts;
    for (double b : report.budgets) parts.push_back(fmt_number(b));
    out << " budgets=[" << join(parts, ",") << "]";
  }
  out << "\n";

  if (report.command == "validate" || report.command == "pipeline") {
    if (report.validation.ok()) {
      out << "validation: OK";
      if (!report.validation.warnings.empty())
        out << " (" << report.validation.warnings.size() << " warnings)";
      out << "\n";
    } else {
      out << "validation: " << report.validation.errors.size()
          << " error(s)\n";
    }
    for (const ValidationIssue& issue : report.validation.errors)
      out << "  error [" << issue.code << "] " << issue.where << ": "
          << issue.message << "\n";
    for (const ValidationIssue& issue : report.validation.warnings)
      out << "  warning [" << issue.code << "] " << issue.where << ": "
          << issue.message << "\n";
  }

  if (report.has_summary)
    out << "model: " << report.groups << " groups, " << report.alternatives
        << " alternatives, design space " << report.design_space << "\n";

  if (!report.priorities.empty()) {
    out << "priorities (" << report.priorities_mode << "):\n";
    for (const GroupPriorities& gp : report.priorities) {
      out << "  " << gp.group << ":";
      for (const auto& [da, priority] : gp.priorities)
        out << " " << da << "=" << priority;
      out << "\n";
    }
  }

  for (const NodeFront& front : report.fronts) {
    out << "node " << front.node << ": space " << front.space
        << ", admissible " << front.admissible << ", front "
        << front.entries.size() << "\n";
    if (front.entries.empty()) out << "  no admissible compositions\n";
    for (const FrontEntry& entry : front.entries)
      out << "  " << entry.name << " = " << join(entry.selection, "*")
          << "  N=" << to_string(entry.quality) << "\n";
  }

  if (!report.solutions.empty()) {
    out << "solutions (" << report.solutions.size() << "):\n";
    for (const FrontEntry& entry : report.solutions)
      out << "  " << entry.name << " = " << join(entry.selection, "*")
          << " -> " << profile_line(report, entry.leaf_profile)
          << "  N=" << to_string(entry.quality) << "\n";
  } else if (report.command == "synth" || report.command == "pipeline" ||
             report.command == "aggregate") {
    out << "no admissible compositions\n";
  }

  if (report.has_aggregation) {
    out << "aggregation:\n";
    auto render_sets = [&](const char* label,
                           const std::map<NodeId, std::vector<DaId>>& sets) {
      out << "  " << label << ":";
      std::vector<NodeId> order;
      if (!report.leaf_order.empty())
        order = report.leaf_order;
      else
        for (const auto& [group, das] : sets) order.push_back(group);
      for (const NodeId& group : order) {
        auto it = sets.find(group);
        if (it == sets.end()) continue;
        out << " " << group << "={" << join(it->second, ",") << "}";
      }
      out << "\n";
    };
    render_sets("kernel", report.kernel);
    render_sets("superstructure", report.superstructure);
    for (const AggregationOutcome& outcome : report.outcomes) {
      out << "  [" << outcome.strategy;
      if (!outcome.method.empty()) out << ", " << outcome.method;
      if (outcome.budget)
        out << ", budget " << fmt_number(*outcome.budget);
      out << "] ";
      if (!outcome.feasible) {
        out << "INFEASIBLE\n";
        continue;
      }
      if (outcome.strategy == "median")
        out << outcome.median_name
            << " objective=" << fmt_number(outcome.median_objective) << "\n";
      else
        out << "cost=" << fmt_number(outcome.cost)
            << " profit=" << fmt_number(outcome.profit) << "\n";
      out << "    " << profile_line(report, outcome.profile) << "\n";
    }
  }

  return out.str();
}

json quality_json(const QualityVector& q) {
  return {{"w", q.w}, {"n", q.counts}};
}

json entry_json(const FrontEntry& entry) {
  json profile = json::object();
  for (const auto& [group, da] : entry.leaf_profile) profile[group] = da;
  return {{"name", entry.name},
          {"selection", entry.selection},
          {"quality", quality_json(entry.quality)},
          {"profile", std::move(profile)}};
}

std::string render_machine(const RunReport& report) {
  json j;
  j["schema_version"] = 1;
  j["config"] = {{"command", report.command},
                 {"model", report.model_path},
                 {"priorities", report.priorities_mode},
                 {"p", report.concordance_min},
                 {"q", report.discordance_max},
                 {"propagate_layers", report.propagate_layers},
                 {"mcp", report.mcp_method},
                 {"strategy", report.strategy},
                 {"budgets", report.budgets}};

  json validation;
  validation["ok"] = report.validation.ok();
  validation["errors"] = json::array();
  for (const ValidationIssue& issue : report.validation.errors)
    validation["errors"].push_back({{"code", issue.code},
                                    {"where", issue.where},
                                    {"message", issue.message}});
  validation["warnings"] = json::array();
  for (const ValidationIssue& issue : report.validation.warnings)
    validation["warnings"].push_back({{"code", issue.code},
                                      {"where", issue.where},
                                      {"message", issue.message}});
  j["validation"] = std::move(validation);

  if (report.has_summary)
    j["model"] = {{"groups", report.groups},
                  {"alternatives", report.alternatives},
                  {"design_space", report.design_space},
                  {"leaf_order", report.leaf_order}};

  if (!report.priorities.empty()) {
    json priorities = json::array();
    for (const GroupPriorities& gp : report.priorities) {
      json das = json::array();
      for (const auto& [da, priority] : gp.priorities)
        das.push_back({{"da", da}, {"priority", priority}});
      priorities.push_back({{"group", gp.group}, {"das", std::move(das)}});
    }
    j["priorities"] = std::move(priorities);
  }

  if (!report.fronts.empty()) {
    json fronts = json::array();
    for (const NodeFront& front : report.fronts) {
      json entries = json::array();
      for (const FrontEntry& entry : front.entries)
        entries.push_back(entry_json(entry));
      fronts.push_back({{"node", front.node},
                        {"space", front.space},
                        {"admissible", front.admissible},
                        {"front", std::move(entries)}});
    }
    j["fronts"] = std::move(fronts);
  }

  if (!report.solutions.empty()) {
    json solutions = json::array();
    for (const FrontEntry& entry : report.solutions)
      solutions.push_back(entry_json(entry));
    j["solutions"] = std::move(solutions);
  }

  if (report.has_aggregation) {
    json agg;
    json kernel = json::object();
    for (const auto& [group, das] : report.kernel) kernel[group] = das;
    json super = json::object();
    for (const auto& [group, das] : report.superstructure) super[group] = das;
    agg["kernel"] = std::move(kernel);
    agg["superstructure"] = std::move(super);
    json outcomes = json::array();
    for (const AggregationOutcome& outcome : report.outcomes) {
      json oj;
      oj["strategy"] = outcome.strategy;
      if (!outcome.method.empty()) oj["method"] = outcome.method;
      if (outcome.budget) oj["budget"] = *outcome.budget;
      oj["feasible"] = outcome.feasible;
      if (outcome.feasible) {
        json profile = json::object();
        for (const auto& [group, da] : outcome.profile) profile[group] = da;
        oj["profile"] = std::move(profile);
        if (outcome.strategy == "median") {
          oj["median"] = outcome.median_name;
          oj["objective"] = outcome.median_objective;
        } else {
          oj["cost"] = outcome.cost;
          oj["profit"] = outcome.profit;
        }
      }
      outcomes.push_back(std::move(oj));
    }
    agg["results"] = std::move(outcomes);
    j["aggregation"] = std::move(agg);
  }

  return j.dump(2) + "\n";
}

}  // namespace

std::string render_report(const RunReport& report, ReportFormat format) {
  return format == ReportFormat::text ? render_text(report)
                                      : render_machine(report);
}

}  // namespace morph
