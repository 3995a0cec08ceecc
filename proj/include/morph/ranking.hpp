#pragma once

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "morph/types.hpp"

namespace morph {

/// Criterion weight: the sign is the optimization direction (positive =
/// larger is better), the magnitude is the importance.
struct CriterionSpec {
  CriterionId id;
  std::string name;
  double weight = 1.0;  // must be nonzero

  friend bool operator==(const CriterionSpec&, const CriterionSpec&) = default;
};

/// Criteria estimates for the alternatives of one group. Values may be
/// absent; a criterion participates ("is active") only when every
/// alternative of the group has a value for it.
struct EstimateTable {
  NodeId group;
  std::vector<DaId> das;
  std::vector<CriterionSpec> criteria;
  std::map<std::pair<DaId, CriterionId>, double> values;

  std::vector<CriterionId> active_criteria() const;
};

struct Thresholds {
  double concordance_min = 0.5;  // p in (0, 1]
  double discordance_max = 1.0;  // q in [0, 1]
};

struct OutrankingGraph {
  std::vector<DaId> vertices;
  std::set<std::pair<DaId, DaId>> arcs;  // (a, b): a outranks b
};

/// Weighted share of active criteria on which `a` is at least as good as
/// `b`, in [0, 1]. Throws Errc::no_active_criteria.
double concordance(const EstimateTable& table, const DaId& a, const DaId& b);

/// Largest direction-adjusted margin by which `b` beats `a` on some active
/// criterion, normalized by that criterion's value range over the group.
/// 0 when `b` beats `a` nowhere; zero-range criteria contribute 0.
double discordance(const EstimateTable& table, const DaId& a, const DaId& b);

/// Arc (a, b) present iff concordance(a,b) >= p and discordance(a,b) <= q.
OutrankingGraph outranking_graph(const EstimateTable& table, Thresholds t);

/// Condense strongly connected components, then peel source layers: layer 1
/// is every condensed vertex without incoming arcs from the remaining set,
/// and so on. The layer index, capped at k, becomes the priority.
std::map<DaId, int> rank_layers(const OutrankingGraph& g, int k);

std::map<DaId, int> rank_group(const EstimateTable& table, Thresholds t,
                               int k);

}  // namespace morph
