#include "morph/model.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <set>

namespace morph {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::unrelated_pair: return "UNRELATED_PAIR";
    case Errc::no_active_criteria: return "NO_ACTIVE_CRITERIA";
    case Errc::shape_mismatch: return "SHAPE_MISMATCH";
    case Errc::infeasible: return "INFEASIBLE";
    case Errc::cap_exceeded: return "CAP_EXCEEDED";
    case Errc::empty_front: return "EMPTY_FRONT";
    case Errc::parse_error: return "PARSE_ERROR";
    case Errc::validation_error: return "VALIDATION_ERROR";
    case Errc::cost_precision: return "COST_PRECISION";
    case Errc::missing_estimate: return "MISSING_ESTIMATE";
    case Errc::missing_budget: return "MISSING_BUDGET";
  }
  return "UNKNOWN";
}

bool natural_less(const std::string& a, const std::string& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (std::isdigit(static_cast<unsigned char>(a[i])) &&
        std::isdigit(static_cast<unsigned char>(b[j]))) {
      std::size_t ie = i, je = j;
      while (ie < a.size() && std::isdigit(static_cast<unsigned char>(a[ie])))
        ++ie;
      while (je < b.size() && std::isdigit(static_cast<unsigned char>(b[je])))
        ++je;
      std::size_t is = i, js = j;
      while (is < ie - 1 && a[is] == '0') ++is;  // trim leading zeros
      while (js < je - 1 && b[js] == '0') ++js;
      const std::size_t la = ie - is, lb = je - js;
      if (la != lb) return la < lb;
      const int cmp = a.compare(is, la, b, js, lb);
      if (cmp != 0) return cmp < 0;
      i = ie;
      j = je;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  return (a.size() - i) < (b.size() - j);
}

const Node* SystemModel::find_node(const NodeId& id) const {
  auto it = nodes.find(id);
  return it == nodes.end() ? nullptr : &it->second;
}

namespace {

std::map<NodeId, NodeId> parent_map(const SystemModel& model) {
  std::map<NodeId, NodeId> parents;
  for (const auto& [id, node] : model.nodes)
    for (const NodeId& child : node.children)
      if (!parents.count(child)) parents.emplace(child, id);
  return parents;
}

// Lowest common ancestor of two nodes, using the first-parent relation.
std::optional<NodeId> lca(const std::map<NodeId, NodeId>& parents,
                          const NodeId& a, const NodeId& b) {
  std::set<NodeId> seen;
  NodeId cur = a;
  seen.insert(cur);
  while (true) {
    auto it = parents.find(cur);
    if (it == parents.end()) break;
    cur = it->second;
    if (!seen.insert(cur).second) break;  // cycle guard
  }
  cur = b;
  std::set<NodeId> path;
  while (true) {
    if (seen.count(cur)) return cur;
    if (!path.insert(cur).second) break;
    auto it = parents.find(cur);
    if (it == parents.end()) break;
    cur = it->second;
  }
  return std::nullopt;
}

std::optional<int> resolve_pair(const SystemModel& model, const NodeId& scope,
                                const DaId& a, const DaId& b) {
  auto mit = model.matrices.find(scope);
  if (mit == model.matrices.end()) return std::nullopt;
  const CompatibilityMatrix& m = mit->second;
  if (auto it = m.entries.find({a, b}); it != m.entries.end())
    return it->second;
  if (auto it = m.entries.find({b, a}); it != m.entries.end())
    return it->second;
  return m.fallback;
}

std::optional<int> resolved_compat(const SystemModel& model,
                                   const std::map<NodeId, NodeId>& parents,
                                   const DaId& a, const DaId& b) {
  const DesignAlternative* da = find_da(model, a);
  const DesignAlternative* db = find_da(model, b);
  if (!da || !db || da->group == db->group) return std::nullopt;
  auto scope = lca(parents, da->group, db->group);
  if (!scope) return std::nullopt;
  return resolve_pair(model, *scope, a, b);
}

void preorder(const SystemModel& model, const NodeId& id,
              std::set<NodeId>& seen, std::vector<NodeId>& leaves,
              std::vector<NodeId>& internals_post) {
  if (!seen.insert(id).second) return;  // cycle guard
  const Node* node = model.find_node(id);
  if (!node) return;
  if (node->children.empty()) {
    leaves.push_back(id);
    return;
  }
  for (const NodeId& child : node->children)
    preorder(model, child, seen, leaves, internals_post);
  internals_post.push_back(id);
}

}  // namespace

std::vector<NodeId> leaf_groups_preorder(const SystemModel& model) {
  std::set<NodeId> seen;
  std::vector<NodeId> leaves, internals;
  preorder(model, model.root, seen, leaves, internals);
  return leaves;
}

std::vector<NodeId> internal_nodes_postorder(const SystemModel& model) {
  std::set<NodeId> seen;
  std::vector<NodeId> leaves, internals;
  preorder(model, model.root, seen, leaves, internals);
  return internals;
}

const DesignAlternative* find_da(const SystemModel& model, const DaId& id) {
  for (const auto& [nid, node] : model.nodes)
    for (const DesignAlternative& da : node.alternatives)
      if (da.id == id) return &da;
  return nullptr;
}

std::uint64_t count_design_space(const SystemModel& model) {
  std::uint64_t product = 1;
  for (const NodeId& gid : leaf_groups_preorder(model)) {
    const std::uint64_t size = model.nodes.at(gid).alternatives.size();
    if (size != 0 && product > UINT64_MAX / size) return UINT64_MAX;
    product *= size;
  }
  return product;
}

int compat(const SystemModel& model, const DaId& a, const DaId& b) {
  const auto parents = parent_map(model);
  if (auto w = resolved_compat(model, parents, a, b)) return *w;
  throw Error(Errc::unrelated_pair,
              "no compatibility scope relates '" + a + "' and '" + b + "'");
}

ValidationReport validate_model(const SystemModel& model) {
  ValidationReport report;
  auto error = [&report](std::string code, std::string where,
                         std::string message) {
    report.errors.push_back(
        {std::move(code), std::move(where), std::move(message)});
  };

  if (model.priority_levels < 1)
    error("BAD_SCALE", "model", "priority scale length k must be >= 1");
  if (model.compat_levels < 1)
    error("BAD_SCALE", "model", "compatibility scale maximum l must be >= 1");

  if (!model.find_node(model.root)) {
    error("UNKNOWN_ROOT", model.root, "root node does not exist");
    return report;
  }

  // Tree shape: known children, unique parent, no cycles, full reachability.
  std::map<NodeId, int> parent_count;
  for (const auto& [id, node] : model.nodes) {
    if (node.id != id)
      error("NODE_ID_MISMATCH", id, "node keyed '" + id + "' carries id '" +
                                        node.id + "'");
    for (const NodeId& child : node.children) {
      if (!model.find_node(child)) {
        error("UNKNOWN_CHILD", id, "child '" + child + "' does not exist");
        continue;
      }
      parent_count[child] += 1;
      if (child == model.root)
        error("ROOT_HAS_PARENT", id, "root listed as child of '" + id + "'");
    }
  }
  for (const auto& [id, count] : parent_count)
    if (count > 1)
      error("MULTI_PARENT", id,
            "node has " + std::to_string(count) + " parents");

  {
    std::set<NodeId> visiting, done;
    bool cycle = false;
    auto dfs = [&](auto&& self, const NodeId& id) -> void {
      if (done.count(id)) return;
      if (!visiting.insert(id).second) {
        cycle = true;
        return;
      }
      const Node* node = model.find_node(id);
      if (node)
        for (const NodeId& child : node->children)
          if (model.find_node(child)) self(self, child);
      visiting.erase(id);
      done.insert(id);
    };
    dfs(dfs, model.root);
    if (cycle) error("CYCLE", model.root, "child edges form a cycle");
    for (const auto& [id, node] : model.nodes)
      if (!done.count(id))
        error("UNREACHABLE_NODE", id, "node is not reachable from the root");
  }

  // Node kind consistency and design alternatives.
  std::set<DaId> da_ids;
  for (const auto& [id, node] : model.nodes) {
    const bool leaf = node.kind == NodeKind::Group;
    if (leaf && !node.children.empty())
      error("BAD_NODE", id, "group node must not have children");
    if (leaf && node.alternatives.empty())
      error("BAD_NODE", id, "group node needs at least one alternative");
    if (!leaf && node.children.empty())
      error("BAD_NODE", id, "composite node needs at least one child");
    if (!leaf && !node.alternatives.empty())
      error("BAD_NODE", id, "composite node must not carry alternatives");
    for (const DesignAlternative& da : node.alternatives) {
      if (!da_ids.insert(da.id).second)
        error("DUPLICATE_DA", da.id, "alternative id is not unique");
      if (da.group != id)
        error("DA_GROUP_MISMATCH", da.id,
              "alternative claims group '" + da.group + "' but lives in '" +
                  id + "'");
      if (da.priority < 1 || da.priority > model.priority_levels)
        error("BAD_PRIORITY", da.id,
              "priority " + std::to_string(da.priority) +
                  " outside [1, " + std::to_string(model.priority_levels) +
                  "]");
    }
  }
  if (!report.errors.empty()) return report;

  const auto parents = parent_map(model);

  // Child subtree that contains a given leaf group, per scope.
  auto subtree_of = [&](const NodeId& scope, const NodeId& group)
      -> std::optional<NodeId> {
    NodeId cur = group;
    while (true) {
      auto it = parents.find(cur);
      if (it == parents.end()) return std::nullopt;
      if (it->second == scope) return cur;
      cur = it->second;
    }
  };

  // Compatibility matrices: scope shape, value ranges, symmetry, coverage.
  for (const auto& [scope_id, matrix] : model.matrices) {
    const std::string where = "compatibility[" + scope_id + "]";
    if (matrix.scope != scope_id) {
      error("BAD_COMPAT_SCOPE", where, "matrix keyed by a different scope");
      continue;
    }
    const Node* scope = model.find_node(scope_id);
    if (!scope || scope->kind != NodeKind::Composite) {
      error("BAD_COMPAT_SCOPE", where, "scope is not an internal node");
      continue;
    }
    if (matrix.fallback &&
        (*matrix.fallback < 0 || *matrix.fallback > model.compat_levels))
      error("BAD_COMPAT_VALUE", where,
            "default " + std::to_string(*matrix.fallback) + " outside [0, " +
                std::to_string(model.compat_levels) + "]");
    for (const auto& [pair, w] : matrix.entries) {
      const auto& [a, b] = pair;
      if (w < 0 || w > model.compat_levels)
        error("BAD_COMPAT_VALUE", where,
              "entry (" + a + ", " + b + ") = " + std::to_string(w) +
                  " outside [0, " + std::to_string(model.compat_levels) + "]");
      const DesignAlternative* da = find_da(model, a);
      const DesignAlternative* db = find_da(model, b);
      if (!da || !db) {
        error("BAD_COMPAT_PAIR", where,
              "entry (" + a + ", " + b + ") names an unknown alternative");
        continue;
      }
      auto sa = subtree_of(scope_id, da->group);
      auto sb = subtree_of(scope_id, db->group);
      if (!sa || !sb || *sa == *sb)
        error("BAD_COMPAT_PAIR", where,
              "entry (" + a + ", " + b +
                  ") does not cross two child subtrees of the scope");
      if (a > b) continue;  // report each unordered pair once
      auto rit = matrix.entries.find({b, a});
      if (rit != matrix.entries.end() && rit->second != w)
        error("ASYMMETRIC_COMPAT", where,
              "entry (" + a + ", " + b + ") = " + std::to_string(w) +
                  " but (" + b + ", " + a + ") = " +
                  std::to_string(rit->second));
    }
  }

  // Every cross-subtree pair under every composite node must resolve.
  for (const NodeId& scope_id : internal_nodes_postorder(model)) {
    const Node& scope = model.nodes.at(scope_id);
    if (scope.children.size() < 2) continue;
    std::vector<std::vector<const DesignAlternative*>> per_child;
    for (const NodeId& child : scope.children) {
      auto& das = per_child.emplace_back();
      std::set<NodeId> seen;
      std::vector<NodeId> leaves, internals;
      preorder(model, child, seen, leaves, internals);
      for (const NodeId& gid : leaves)
        for (const DesignAlternative& da : model.nodes.at(gid).alternatives)
          das.push_back(&da);
    }
    for (std::size_t i = 0; i < per_child.size(); ++i)
      for (std::size_t j = i + 1; j < per_child.size(); ++j)
        for (const auto* da : per_child[i])
          for (const auto* db : per_child[j])
            if (!resolve_pair(model, scope_id, da->id, db->id))
              error("MISSING_COMPAT", "compatibility[" + scope_id + "]",
                    "pair (" + da->id + ", " + db->id +
                        ") has neither an entry nor a default");
  }

  return report;
}

CompatTable::CompatTable(const SystemModel& model) {
  for (const NodeId& gid : leaf_groups_preorder(model))
    for (const DesignAlternative& da : model.nodes.at(gid).alternatives)
      index_.emplace(da.id, index_.size());
  n_ = index_.size();
  grid_.assign(n_ * n_, -1);
  const auto parents = parent_map(model);
  for (const auto& [a, ia] : index_)
    for (const auto& [b, ib] : index_) {
      if (ia >= ib) continue;
      if (auto w = resolved_compat(model, parents, a, b))
        grid_[ia * n_ + ib] = grid_[ib * n_ + ia] = *w;
    }
}

std::optional<int> CompatTable::try_resolve(const DaId& a,
                                            const DaId& b) const {
  auto ia = index_.find(a);
  auto ib = index_.find(b);
  if (ia == index_.end() || ib == index_.end() || ia->second == ib->second)
    return std::nullopt;
  const int w = grid_[ia->second * n_ + ib->second];
  if (w < 0) return std::nullopt;
  return w;
}

int CompatTable::resolve(const DaId& a, const DaId& b) const {
  if (auto w = try_resolve(a, b)) return *w;
  throw Error(Errc::unrelated_pair,
              "no compatibility scope relates '" + a + "' and '" + b + "'");
}

}  // namespace morph
