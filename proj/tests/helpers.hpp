#pragma once

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "morph/model_io.hpp"
#include "morph/synthesis.hpp"

namespace morph::test {

#ifdef MORPH_SENSOR_MODEL
inline const Problem& sensor() {
  static const Problem problem = parse_model(MORPH_SENSOR_MODEL);
  return problem;
}
#endif

// Leaf profile as a set key, independent of naming.
inline std::map<NodeId, DaId> profile_of(const CompositeSolution& s) {
  return s.leaf_profile;
}

inline std::set<std::map<NodeId, DaId>> profile_set(
    const std::vector<CompositeSolution>& solutions) {
  std::set<std::map<NodeId, DaId>> out;
  for (const CompositeSolution& s : solutions) out.insert(s.leaf_profile);
  return out;
}

// Single-group model: one leaf group with the given priorities.
inline SystemModel group_model(const std::vector<int>& priorities, int k = 3,
                               int l = 3) {
  SystemModel model;
  model.root = "G";
  model.priority_levels = k;
  model.compat_levels = l;
  Node group;
  group.id = "G";
  group.label = "G";
  group.kind = NodeKind::Group;
  for (std::size_t i = 0; i < priorities.size(); ++i)
    group.alternatives.push_back(
        {"G." + std::to_string(i + 1), "G", "", priorities[i]});
  model.nodes.emplace("G", std::move(group));
  return model;
}

// Flat model: a composite root directly over `sizes.size()` leaf groups,
// with an explicit all-pairs compatibility matrix at the root.
struct FlatSpec {
  std::vector<std::vector<int>> priorities;  // per group
  std::map<std::pair<DaId, DaId>, int> compat;
  std::optional<int> fallback;
  int k = 3;
  int l = 3;
};

inline DaId flat_da(std::size_t group, std::size_t item) {
  return "G" + std::to_string(group + 1) + "." + std::to_string(item + 1);
}

inline SystemModel flat_model(const FlatSpec& spec) {
  SystemModel model;
  model.root = "ROOT";
  model.priority_levels = spec.k;
  model.compat_levels = spec.l;
  Node root;
  root.id = "ROOT";
  root.label = "ROOT";
  root.kind = NodeKind::Composite;
  for (std::size_t g = 0; g < spec.priorities.size(); ++g) {
    const NodeId gid = "G" + std::to_string(g + 1);
    root.children.push_back(gid);
    Node group;
    group.id = gid;
    group.label = gid;
    group.kind = NodeKind::Group;
    for (std::size_t i = 0; i < spec.priorities[g].size(); ++i)
      group.alternatives.push_back(
          {flat_da(g, i), gid, "", spec.priorities[g][i]});
    model.nodes.emplace(gid, std::move(group));
  }
  model.nodes.emplace("ROOT", std::move(root));
  if (spec.priorities.size() > 1) {
    CompatibilityMatrix matrix;
    matrix.scope = "ROOT";
    matrix.entries = spec.compat;
    matrix.fallback = spec.fallback;
    model.matrices.emplace("ROOT", std::move(matrix));
  }
  return model;
}

inline SystemModel random_flat_model(std::mt19937& rng) {
  FlatSpec spec;
  spec.k = std::uniform_int_distribution<int>(1, 4)(rng);
  spec.l = std::uniform_int_distribution<int>(1, 4)(rng);
  const int groups = std::uniform_int_distribution<int>(1, 5)(rng);
  for (int g = 0; g < groups; ++g) {
    const int size = std::uniform_int_distribution<int>(1, 6)(rng);
    std::vector<int> priorities;
    for (int i = 0; i < size; ++i)
      priorities.push_back(
          std::uniform_int_distribution<int>(1, spec.k)(rng));
    spec.priorities.push_back(std::move(priorities));
  }
  const bool use_fallback = std::bernoulli_distribution(0.5)(rng);
  if (use_fallback)
    spec.fallback = std::uniform_int_distribution<int>(0, spec.l)(rng);
  for (std::size_t ga = 0; ga < spec.priorities.size(); ++ga)
    for (std::size_t gb = ga + 1; gb < spec.priorities.size(); ++gb)
      for (std::size_t i = 0; i < spec.priorities[ga].size(); ++i)
        for (std::size_t j = 0; j < spec.priorities[gb].size(); ++j) {
          if (use_fallback && std::bernoulli_distribution(0.6)(rng))
            continue;  // leave the pair to the fallback
          spec.compat[{flat_da(ga, i), flat_da(gb, j)}] =
              std::uniform_int_distribution<int>(0, spec.l)(rng);
        }
  return flat_model(spec);
}

inline QualityVector random_quality(std::mt19937& rng, int k, int m, int l) {
  QualityVector q;
  q.w = std::uniform_int_distribution<int>(1, l)(rng);
  q.counts.assign(k, 0);
  for (int i = 0; i < m; ++i)
    q.counts[std::uniform_int_distribution<int>(0, k - 1)(rng)] += 1;
  return q;
}

}  // namespace morph::test
