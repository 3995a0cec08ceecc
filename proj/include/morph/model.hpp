#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "morph/types.hpp"

namespace morph {

/// One concrete option for a leaf component group. Priority is ordinal,
/// 1 = best, k = worst.
struct DesignAlternative {
  DaId id;
  NodeId group;
  std::string name;
  int priority = 1;

  friend bool operator==(const DesignAlternative&,
                         const DesignAlternative&) = default;
};

enum class NodeKind { Group, Composite };

/// Tree node: either a leaf group carrying design alternatives or a composite
/// over child subtrees.
struct Node {
  NodeId id;
  std::string label;
  NodeKind kind = NodeKind::Group;
  std::vector<NodeId> children;                 // empty iff Group
  std::vector<DesignAlternative> alternatives;  // nonempty iff Group

  friend bool operator==(const Node&, const Node&) = default;
};

/// Pairwise ordinal compatibility (0..l, 0 = forbidden) between alternatives
/// that live in different child subtrees of `scope`. Entries are stored as
/// given; lookups accept either orientation. Unlisted pairs fall back to
/// `fallback` when present.
struct CompatibilityMatrix {
  NodeId scope;
  std::map<std::pair<DaId, DaId>, int> entries;
  std::optional<int> fallback;

  friend bool operator==(const CompatibilityMatrix&,
                         const CompatibilityMatrix&) = default;
};

struct SystemModel {
  NodeId root;
  std::map<NodeId, Node> nodes;
  int priority_levels = 1;  // k: length of the DA priority scale
  int compat_levels = 1;    // l: best compatibility level
  std::map<NodeId, CompatibilityMatrix> matrices;  // keyed by scope

  const Node* find_node(const NodeId& id) const;

  friend bool operator==(const SystemModel&, const SystemModel&) = default;
};

struct ValidationIssue {
  std::string code;
  std::string where;
  std::string message;

  friend bool operator==(const ValidationIssue&,
                         const ValidationIssue&) = default;
};

struct ValidationReport {
  std::vector<ValidationIssue> errors;
  std::vector<ValidationIssue> warnings;
  bool ok() const { return errors.empty(); }

  friend bool operator==(const ValidationReport&,
                         const ValidationReport&) = default;
};

/// Structural validation. Violations are reported as data, never thrown.
ValidationReport validate_model(const SystemModel& model);

/// Product of group sizes over all leaf groups (compatibility ignored).
/// Saturates at the maximum representable value.
std::uint64_t count_design_space(const SystemModel& model);

/// Resolved symmetric compatibility of two alternatives from different leaf
/// groups. Resolution happens at the lowest common ancestor of the two
/// groups. Throws Errc::unrelated_pair when no matrix covers the pair.
int compat(const SystemModel& model, const DaId& a, const DaId& b);

std::vector<NodeId> leaf_groups_preorder(const SystemModel& model);
std::vector<NodeId> internal_nodes_postorder(const SystemModel& model);
const DesignAlternative* find_da(const SystemModel& model, const DaId& id);

/// Dense all-pairs compatibility lookups for enumeration loops. Built once
/// per model; resolution rules identical to compat().
class CompatTable {
 public:
  explicit CompatTable(const SystemModel& model);

  /// Throws Errc::unrelated_pair when the pair has no resolving scope.
  int resolve(const DaId& a, const DaId& b) const;
  std::optional<int> try_resolve(const DaId& a, const DaId& b) const;

 private:
  std::map<DaId, std::size_t> index_;
  std::vector<int> grid_;  // -1 = unrelated
  std::size_t n_ = 0;
};

}  // namespace morph
