#include "morph/model_io.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace morph {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(Errc::parse_error, where + ": " + what);
}

// Byte offset -> "line L, column C" over the original buffer.
std::string position_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

void expect_object(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
}

void expect_keys(const json& j, const std::string& where,
                 std::initializer_list<const char*> allowed) {
  expect_object(j, where);
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed)
      if (key == a) known = true;
    if (!known) fail(where, "unknown key '" + key + "'");
  }
}

std::string get_string(const json& j, const std::string& where,
                       const char* key) {
  if (!j.contains(key)) fail(where, std::string("missing key '") + key + "'");
  if (!j.at(key).is_string())
    fail(where, std::string("key '") + key + "' must be a string");
  return j.at(key).get<std::string>();
}

int get_int(const json& j, const std::string& where, const char* key) {
  if (!j.contains(key)) fail(where, std::string("missing key '") + key + "'");
  if (!j.at(key).is_number_integer())
    fail(where, std::string("key '") + key + "' must be an integer");
  return j.at(key).get<int>();
}

double get_number(const json& j, const std::string& where, const char* key) {
  if (!j.contains(key)) fail(where, std::string("missing key '") + key + "'");
  if (!j.at(key).is_number())
    fail(where, std::string("key '") + key + "' must be a number");
  const double v = j.at(key).get<double>();
  if (!std::isfinite(v))
    fail(where, std::string("key '") + key + "' must be finite");
  return v;
}

SystemModel parse_model_section(const json& j) {
  expect_keys(j, "model", {"k", "l", "root", "nodes"});
  SystemModel model;
  model.priority_levels = get_int(j, "model", "k");
  model.compat_levels = get_int(j, "model", "l");
  model.root = get_string(j, "model", "root");
  if (!j.contains("nodes") || !j.at("nodes").is_array())
    fail("model", "'nodes' must be an array");

  std::size_t idx = 0;
  for (const json& nj : j.at("nodes")) {
    const std::string where = "model.nodes[" + std::to_string(idx++) + "]";
    expect_keys(nj, where, {"id", "label", "children", "alternatives"});
    Node node;
    node.id = get_string(nj, where, "id");
    node.label = nj.contains("label") ? get_string(nj, where, "label")
                                      : node.id;
    const bool has_children = nj.contains("children");
    const bool has_alternatives = nj.contains("alternatives");
    if (has_children == has_alternatives)
      fail(where, "exactly one of 'children'/'alternatives' is required");
    if (has_children) {
      node.kind = NodeKind::Composite;
      if (!nj.at("children").is_array())
        fail(where, "'children' must be an array");
      for (const json& c : nj.at("children")) {
        if (!c.is_string()) fail(where, "children must be node ids");
        node.children.push_back(c.get<std::string>());
      }
    } else {
      node.kind = NodeKind::Group;
      if (!nj.at("alternatives").is_array())
        fail(where, "'alternatives' must be an array");
      std::size_t aidx = 0;
      for (const json& aj : nj.at("alternatives")) {
        const std::string awhere =
            where + ".alternatives[" + std::to_string(aidx++) + "]";
        expect_keys(aj, awhere, {"id", "name", "priority"});
        DesignAlternative da;
        da.id = get_string(aj, awhere, "id");
        da.group = node.id;
        da.name = aj.contains("name") ? get_string(aj, awhere, "name") : da.id;
        da.priority = get_int(aj, awhere, "priority");
        node.alternatives.push_back(std::move(da));
      }
    }
    if (!model.nodes.emplace(node.id, node).second)
      fail(where, "duplicate node id '" + node.id + "'");
  }
  return model;
}

void parse_compatibility_section(const json& j, SystemModel& model) {
  if (!j.is_array()) fail("compatibility", "must be an array of scopes");
  std::size_t idx = 0;
  for (const json& sj : j) {
    const std::string where = "compatibility[" + std::to_string(idx++) + "]";
    expect_keys(sj, where, {"scope", "default", "pairs"});
    CompatibilityMatrix matrix;
    matrix.scope = get_string(sj, where, "scope");
    if (sj.contains("default"))
      matrix.fallback = get_int(sj, where, "default");
    if (sj.contains("pairs")) {
      if (!sj.at("pairs").is_array()) fail(where, "'pairs' must be an array");
      for (const json& pj : sj.at("pairs")) {
        if (!pj.is_array() || pj.size() != 3 || !pj.at(0).is_string() ||
            !pj.at(1).is_string() || !pj.at(2).is_number_integer())
          fail(where, "each pair must be [da, da, w]");
        const DaId a = pj.at(0).get<std::string>();
        const DaId b = pj.at(1).get<std::string>();
        const int w = pj.at(2).get<int>();
        // Store one orientation per pair. A disagreeing reverse listing is
        // kept as given so that validation can flag the asymmetry.
        const auto key =
            a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
        auto [it, inserted] = matrix.entries.emplace(key, w);
        if (!inserted && it->second != w) {
          auto [rit, raw_inserted] =
              matrix.entries.emplace(std::make_pair(a, b), w);
          if (!raw_inserted && rit->second != w)
            fail(where, "conflicting duplicate entry (" + a + ", " + b + ")");
        }
      }
    }
    if (!model.matrices.emplace(matrix.scope, matrix).second)
      fail(where, "duplicate scope '" + matrix.scope + "'");
  }
}

CriteriaData parse_criteria_section(const json& j) {
  expect_keys(j, "criteria", {"specs", "estimates"});
  CriteriaData data;
  if (!j.contains("specs") || !j.at("specs").is_array())
    fail("criteria", "'specs' must be an array");
  std::size_t idx = 0;
  for (const json& cj : j.at("specs")) {
    const std::string where = "criteria.specs[" + std::to_string(idx++) + "]";
    expect_keys(cj, where, {"id", "name", "weight"});
    CriterionSpec spec;
    spec.id = get_string(cj, where, "id");
    spec.name = cj.contains("name") ? get_string(cj, where, "name") : spec.id;
    spec.weight = get_number(cj, where, "weight");
    if (spec.weight == 0) fail(where, "weight must be nonzero");
    for (const CriterionSpec& other : data.specs)
      if (other.id == spec.id)
        fail(where, "duplicate criterion id '" + spec.id + "'");
    data.specs.push_back(std::move(spec));
  }
  if (j.contains("estimates")) {
    if (!j.at("estimates").is_array())
      fail("criteria", "'estimates' must be an array");
    idx = 0;
    for (const json& ej : j.at("estimates")) {
      const std::string where =
          "criteria.estimates[" + std::to_string(idx++) + "]";
      expect_keys(ej, where, {"da", "values"});
      const DaId da = get_string(ej, where, "da");
      if (!ej.contains("values") || !ej.at("values").is_object())
        fail(where, "'values' must be an object");
      for (const auto& [cid, vj] : ej.at("values").items()) {
        bool known = false;
        for (const CriterionSpec& spec : data.specs)
          if (spec.id == cid) known = true;
        if (!known) fail(where, "unknown criterion '" + cid + "'");
        if (!vj.is_number())
          fail(where, "estimate for '" + cid + "' must be a number");
        const double v = vj.get<double>();
        if (!std::isfinite(v))
          fail(where, "estimate for '" + cid + "' must be finite");
        if (!data.values.emplace(std::make_pair(da, cid), v).second)
          fail(where, "duplicate estimate for ('" + da + "', '" + cid + "')");
      }
    }
  }
  return data;
}

AggregationData parse_aggregation_section(const json& j) {
  expect_keys(j, "aggregation", {"estimates", "budgets"});
  AggregationData data;
  if (j.contains("estimates")) {
    if (!j.at("estimates").is_array())
      fail("aggregation", "'estimates' must be an array");
    std::size_t idx = 0;
    for (const json& ej : j.at("estimates")) {
      const std::string where =
          "aggregation.estimates[" + std::to_string(idx++) + "]";
      expect_keys(ej, where, {"da", "cost", "profit"});
      const DaId da = get_string(ej, where, "da");
      CostProfit cp;
      cp.cost = get_number(ej, where, "cost");
      cp.profit = get_number(ej, where, "profit");
      if (cp.cost < 0) fail(where, "cost must be nonnegative");
      if (!data.estimates.emplace(da, cp).second)
        fail(where, "duplicate estimate for '" + da + "'");
    }
  }
  if (j.contains("budgets")) {
    if (!j.at("budgets").is_array())
      fail("aggregation", "'budgets' must be an array");
    for (const json& bj : j.at("budgets")) {
      if (!bj.is_number()) fail("aggregation", "budgets must be numbers");
      data.budgets.push_back(bj.get<double>());
    }
  }
  return data;
}

void cross_check(const Problem& problem) {
  ValidationReport report = validate_model(problem.model);
  auto error = [&report](std::string code, std::string where,
                         std::string message) {
    report.errors.push_back(
        {std::move(code), std::move(where), std::move(message)});
  };

  if (problem.criteria)
    for (const auto& [key, value] : problem.criteria->values)
      if (!find_da(problem.model, key.first))
        error("UNKNOWN_DA", "criteria",
              "estimate for unknown alternative '" + key.first + "'");
  if (problem.aggregation)
    for (const auto& [da, cp] : problem.aggregation->estimates)
      if (!find_da(problem.model, da))
        error("UNKNOWN_DA", "aggregation",
              "estimate for unknown alternative '" + da + "'");

  if (!report.ok()) {
    std::string summary = "model is invalid:";
    for (const ValidationIssue& issue : report.errors) {
      summary += "\n  [" + issue.code + "] " + issue.where + ": " +
                 issue.message;
    }
    throw ValidationFailure(std::move(report), summary);
  }
}

}  // namespace

Problem parse_model_text(const std::string& text,
                         const std::string& source_name) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::parse_error, source_name + " (" +
                                       position_of(text, e.byte) +
                                       "): " + e.what());
  }

  expect_keys(j, source_name,
              {"model", "criteria", "compatibility", "aggregation"});
  if (!j.contains("model")) fail(source_name, "missing 'model' section");

  Problem problem;
  problem.model = parse_model_section(j.at("model"));
  if (j.contains("compatibility"))
    parse_compatibility_section(j.at("compatibility"), problem.model);
  if (j.contains("criteria"))
    problem.criteria = parse_criteria_section(j.at("criteria"));
  if (j.contains("aggregation"))
    problem.aggregation = parse_aggregation_section(j.at("aggregation"));

  cross_check(problem);
  return problem;
}

Problem parse_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(Errc::parse_error, "cannot open model file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_model_text(buffer.str(), path);
}

namespace {

void preorder_nodes(const SystemModel& model, const NodeId& id,
                    std::set<NodeId>& seen, std::vector<const Node*>& out) {
  const Node* node = model.find_node(id);
  if (!node || !seen.insert(id).second) return;
  out.push_back(node);
  for (const NodeId& child : node->children)
    preorder_nodes(model, child, seen, out);
}

}  // namespace

std::string serialize_problem(const Problem& problem) {
  json j;
  const SystemModel& model = problem.model;

  json nodes = json::array();
  std::vector<const Node*> ordered;
  std::set<NodeId> seen;
  preorder_nodes(model, model.root, seen, ordered);
  for (const Node* node : ordered) {
    json nj;
    nj["id"] = node->id;
    nj["label"] = node->label;
    if (node->kind == NodeKind::Composite) {
      nj["children"] = node->children;
    } else {
      json alts = json::array();
      for (const DesignAlternative& da : node->alternatives)
        alts.push_back(
            {{"id", da.id}, {"name", da.name}, {"priority", da.priority}});
      nj["alternatives"] = std::move(alts);
    }
    nodes.push_back(std::move(nj));
  }
  j["model"] = {{"k", model.priority_levels},
                {"l", model.compat_levels},
                {"root", model.root},
                {"nodes", std::move(nodes)}};

  if (!model.matrices.empty()) {
    json scopes = json::array();
    for (const auto& [scope_id, matrix] : model.matrices) {
      json sj;
      sj["scope"] = scope_id;
      if (matrix.fallback) sj["default"] = *matrix.fallback;
      if (!matrix.entries.empty()) {
        // Canonical upper triangle: one row per unordered pair.
        std::map<std::pair<DaId, DaId>, int> canonical;
        for (const auto& [pair, w] : matrix.entries) {
          auto key = pair.first <= pair.second
                         ? pair
                         : std::make_pair(pair.second, pair.first);
          canonical.emplace(key, w);
        }
        json pairs = json::array();
        for (const auto& [pair, w] : canonical)
          pairs.push_back({pair.first, pair.second, w});
        sj["pairs"] = std::move(pairs);
      }
      scopes.push_back(std::move(sj));
    }
    j["compatibility"] = std::move(scopes);
  }

  if (problem.criteria) {
    json specs = json::array();
    for (const CriterionSpec& spec : problem.criteria->specs)
      specs.push_back(
          {{"id", spec.id}, {"name", spec.name}, {"weight", spec.weight}});
    json estimates = json::array();
    std::map<DaId, json> per_da;
    for (const auto& [key, value] : problem.criteria->values)
      per_da[key.first][key.second] = value;
    for (const auto& [da, values] : per_da)
      estimates.push_back({{"da", da}, {"values", values}});
    j["criteria"] = {{"specs", std::move(specs)},
                     {"estimates", std::move(estimates)}};
  }

  if (problem.aggregation) {
    json estimates = json::array();
    for (const auto& [da, cp] : problem.aggregation->estimates)
      estimates.push_back(
          {{"da", da}, {"cost", cp.cost}, {"profit", cp.profit}});
    j["aggregation"] = {{"estimates", std::move(estimates)},
                        {"budgets", problem.aggregation->budgets}};
  }

  return j.dump(2) + "\n";
}

EstimateTable estimate_table(const Problem& problem, const NodeId& group) {
  EstimateTable table;
  table.group = group;
  const Node* node = problem.model.find_node(group);
  if (!node || node->kind != NodeKind::Group)
    throw Error(Errc::validation_error, "'" + group + "' is not a leaf group");
  for (const DesignAlternative& da : node->alternatives)
    table.das.push_back(da.id);
  if (problem.criteria) {
    table.criteria = problem.criteria->specs;
    for (const auto& [key, value] : problem.criteria->values)
      if (std::find(table.das.begin(), table.das.end(), key.first) !=
          table.das.end())
        table.values.emplace(key, value);
  }
  return table;
}

}  // namespace morph
