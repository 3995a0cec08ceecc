#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "morph/model.hpp"

namespace morph {

/// Composition quality N(S) = (w; n1..nk): w is the minimum pairwise
/// compatibility inside the composition and nr counts the composed parts at
/// priority level r.
struct QualityVector {
  int w = 0;
  std::vector<int> counts;

  int parts() const;

  friend bool operator==(const QualityVector&, const QualityVector&) = default;
};

/// Total order used only for bucketing/canonical output, not for dominance.
bool lattice_key_less(const QualityVector& a, const QualityVector& b);

/// Renders "(3; 3,1,0)".
std::string to_string(const QualityVector& q);

/// Strict dominance in the quality lattice: w1 >= w2 and every prefix sum of
/// the counts of the first vector is >= the corresponding prefix sum of the
/// second, with at least one strict inequality overall. Throws
/// Errc::shape_mismatch when the scale lengths or part counts differ.
bool strictly_dominates(const QualityVector& a, const QualityVector& b);

struct CompositeSolution {
  NodeId node;
  std::string name;
  std::vector<DaId> selection;  // one entry per child subtree, child order
  QualityVector quality;
  std::map<NodeId, DaId> leaf_profile;

  friend bool operator==(const CompositeSolution&,
                         const CompositeSolution&) = default;
};

/// A composite solution promoted to act as an alternative of its node.
struct CompositeDa {
  CompositeSolution solution;
  int priority = 1;
};

/// Minimum resolved compatibility over all pairs of the given alternatives
/// (which must come from pairwise different leaf groups). A single
/// alternative has no pairs and scores the best level l.
int min_compatibility(const SystemModel& model,
                      const std::vector<DaId>& selection);

/// (min_compatibility; per-priority counts) of a flat selection.
QualityVector quality_vector(const SystemModel& model,
                             const std::vector<DaId>& selection);

/// Drops inadmissible candidates (w = 0), then keeps exactly the candidates
/// not strictly dominated by any other. Candidates with equal quality are
/// all retained. Output sorted by name.
std::vector<CompositeSolution> pareto_front(
    std::vector<CompositeSolution> candidates);

/// Pareto-layer peeling: layer 1 is the nondominated set, remove and repeat.
/// The layer index (capped at k) becomes the composite priority. Output
/// ordered by (layer, input order).
std::vector<CompositeDa> assign_layer_priorities(
    const std::vector<CompositeSolution>& candidates, int k);

struct SynthesisOptions {
  int propagate_layers = 1;      // composite layers carried upward
  bool flatten_quality = false;  // score over leaf constituents, not units
};

struct NodeSynthesis {
  NodeId node;
  std::uint64_t space = 0;       // selections at this node (product)
  std::uint64_t admissible = 0;  // selections with w > 0
  std::vector<CompositeSolution> front;  // Pareto layer 1, naming order
  std::vector<CompositeDa> propagated;   // layers 1..propagate_layers
};

struct SynthesisResult {
  std::vector<NodeSynthesis> nodes;  // post-order; last entry is the root
  const NodeSynthesis& root() const { return nodes.back(); }
  // By value: the result is often a temporary at call sites.
  std::vector<CompositeSolution> root_solutions() const {
    return nodes.back().front;
  }
};

/// Bottom-up composition: at every internal node enumerate one choice per
/// child subtree, drop selections containing an incompatible pair, score the
/// rest with quality vectors and keep the Pareto-efficient set. Layer-1
/// composites (more with propagate_layers > 1) become the alternatives of
/// the node for its parent. Throws Errc::empty_front when some node has no
/// admissible selection.
SynthesisResult synthesize(const SystemModel& model,
                           const SynthesisOptions& options = {});

/// Enumeration cap for brute_force_synthesize; MORPH_BRUTE_CAP overrides the
/// built-in default of 10^6.
std::uint64_t brute_force_cap();

/// Testing oracle: enumerate every full leaf profile of the model, score it
/// flat (w over all cross-group pairs, counts over all leaf priorities) and
/// Pareto-filter once. Throws Errc::cap_exceeded when the design space
/// exceeds `cap`.
std::vector<CompositeSolution> brute_force_synthesize(const SystemModel& model,
                                                      std::uint64_t cap);
std::vector<CompositeSolution> brute_force_synthesize(const SystemModel& model);

}  // namespace morph
