#include "morph/synthesis.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <set>

namespace morph {

int QualityVector::parts() const {
  return std::accumulate(counts.begin(), counts.end(), 0);
}

bool lattice_key_less(const QualityVector& a, const QualityVector& b) {
  if (a.w != b.w) return a.w < b.w;
  return a.counts < b.counts;
}

std::string to_string(const QualityVector& q) {
  std::string out = "(" + std::to_string(q.w) + ";";
  for (std::size_t i = 0; i < q.counts.size(); ++i)
    out += (i == 0 ? " " : ",") + std::to_string(q.counts[i]);
  return out + ")";
}

bool strictly_dominates(const QualityVector& a, const QualityVector& b) {
  if (a.counts.size() != b.counts.size())
    throw Error(Errc::shape_mismatch,
                "quality vectors with different scale lengths: " +
                    to_string(a) + " vs " + to_string(b));
  if (a.parts() != b.parts())
    throw Error(Errc::shape_mismatch,
                "quality vectors over different part counts: " + to_string(a) +
                    " vs " + to_string(b));
  if (a.w < b.w) return false;
  bool strict = a.w > b.w;
  int prefix_a = 0, prefix_b = 0;
  for (std::size_t r = 0; r < a.counts.size(); ++r) {
    prefix_a += a.counts[r];
    prefix_b += b.counts[r];
    if (prefix_a < prefix_b) return false;
    if (prefix_a > prefix_b) strict = true;
  }
  return strict;
}

namespace {

using QKey = std::pair<int, std::vector<int>>;

QKey key_of(const QualityVector& q) { return {q.w, q.counts}; }

QualityVector key_to_vector(const QKey& key) { return {key.first, key.second}; }

// Pareto layers over the distinct quality vectors of the candidates.
// Returns the 1-based layer per candidate; 0 means below max_layers.
std::vector<int> peel_layers(const std::vector<QualityVector>& qualities,
                             int max_layers) {
  std::map<QKey, int> layer_of_key;
  for (const QualityVector& q : qualities) layer_of_key.emplace(key_of(q), 0);

  std::vector<QKey> remaining;
  for (const auto& [key, layer] : layer_of_key) remaining.push_back(key);

  for (int layer = 1; !remaining.empty() && layer <= max_layers; ++layer) {
    std::vector<QKey> front, rest;
    for (const QKey& k : remaining) {
      bool dominated = false;
      for (const QKey& other : remaining)
        if (strictly_dominates(key_to_vector(other), key_to_vector(k))) {
          dominated = true;
          break;
        }
      (dominated ? rest : front).push_back(k);
    }
    for (const QKey& k : front) layer_of_key[k] = layer;
    remaining = std::move(rest);
  }

  std::vector<int> layers;
  layers.reserve(qualities.size());
  for (const QualityVector& q : qualities)
    layers.push_back(layer_of_key.at(key_of(q)));
  return layers;
}

}  // namespace

int min_compatibility(const SystemModel& model,
                      const std::vector<DaId>& selection) {
  const CompatTable table(model);
  int w = model.compat_levels;
  for (std::size_t i = 0; i < selection.size() && w > 0; ++i)
    for (std::size_t j = i + 1; j < selection.size() && w > 0; ++j)
      w = std::min(w, table.resolve(selection[i], selection[j]));
  return w;
}

QualityVector quality_vector(const SystemModel& model,
                             const std::vector<DaId>& selection) {
  QualityVector q;
  q.w = min_compatibility(model, selection);
  q.counts.assign(model.priority_levels, 0);
  for (const DaId& id : selection) {
    const DesignAlternative* da = find_da(model, id);
    if (!da)
      throw Error(Errc::unrelated_pair, "unknown alternative '" + id + "'");
    q.counts.at(da->priority - 1) += 1;
  }
  return q;
}

std::vector<CompositeSolution> pareto_front(
    std::vector<CompositeSolution> candidates) {
  std::erase_if(candidates,
                [](const CompositeSolution& c) { return c.quality.w == 0; });
  if (candidates.empty()) return candidates;

  std::vector<QualityVector> qualities;
  qualities.reserve(candidates.size());
  for (const CompositeSolution& c : candidates) qualities.push_back(c.quality);
  const std::vector<int> layers = peel_layers(qualities, 1);

  std::vector<CompositeSolution> front;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (layers[i] == 1) front.push_back(std::move(candidates[i]));
  std::stable_sort(front.begin(), front.end(),
                   [](const CompositeSolution& a, const CompositeSolution& b) {
                     return natural_less(a.name, b.name);
                   });
  return front;
}

std::vector<CompositeDa> assign_layer_priorities(
    const std::vector<CompositeSolution>& candidates, int k) {
  std::vector<QualityVector> qualities;
  qualities.reserve(candidates.size());
  for (const CompositeSolution& c : candidates) qualities.push_back(c.quality);
  const std::vector<int> layers =
      peel_layers(qualities, static_cast<int>(candidates.size()));

  std::vector<CompositeDa> out;
  const int max_layer =
      layers.empty() ? 0 : *std::max_element(layers.begin(), layers.end());
  for (int layer = 1; layer <= max_layer; ++layer)
    for (std::size_t i = 0; i < candidates.size(); ++i)
      if (layers[i] == layer)
        out.push_back({candidates[i], std::min(layer, k)});
  return out;
}

namespace {

// One selectable alternative of a child subtree: either a leaf DA or a
// composite promoted from below.
struct AltInfo {
  DaId id;
  int priority = 1;
  int internal_w = 0;               // composite's own w; l for leaf DAs
  std::vector<DaId> leaves;         // leaf constituents
  std::vector<int> leaf_priorities;
  std::map<NodeId, DaId> profile;
};

struct Candidate {
  std::vector<int> digits;  // chosen alternative index per child
  QualityVector quality;
};

NodeSynthesis make_group_synthesis(const SystemModel& model,
                                   const Node& group) {
  // A leaf group acting as the whole system: each alternative stands alone.
  NodeSynthesis ns;
  ns.node = group.id;
  ns.space = group.alternatives.size();

  std::vector<QualityVector> qualities;
  for (const DesignAlternative& da : group.alternatives) {
    QualityVector q;
    q.w = model.compat_levels;
    q.counts.assign(model.priority_levels, 0);
    q.counts.at(da.priority - 1) = 1;
    qualities.push_back(std::move(q));
  }
  ns.admissible = qualities.size();
  if (qualities.empty())
    throw Error(Errc::empty_front,
                "no admissible compositions at node '" + group.id + "'");

  const std::vector<int> layers =
      peel_layers(qualities, static_cast<int>(qualities.size()));
  const int max_layer = *std::max_element(layers.begin(), layers.end());
  int ordinal = 0;
  for (int layer = 1; layer <= max_layer; ++layer)
    for (std::size_t i = 0; i < group.alternatives.size(); ++i) {
      if (layers[i] != layer) continue;
      const DesignAlternative& da = group.alternatives[i];
      CompositeSolution s;
      s.node = group.id;
      s.name = group.id + std::to_string(++ordinal);
      s.selection = {da.id};
      s.quality = qualities[i];
      s.leaf_profile[group.id] = da.id;
      if (layer == 1) ns.front.push_back(s);
      ns.propagated.push_back(
          {std::move(s), std::min(layer, model.priority_levels)});
    }
  return ns;
}

}  // namespace

SynthesisResult synthesize(const SystemModel& model,
                           const SynthesisOptions& options) {
  SynthesisResult result;
  const Node& root = model.nodes.at(model.root);
  if (root.kind == NodeKind::Group) {
    result.nodes.push_back(make_group_synthesis(model, root));
    return result;
  }

  const CompatTable table(model);
  std::map<NodeId, std::size_t> synthesized;  // node -> index in result.nodes

  for (const NodeId& node_id : internal_nodes_postorder(model)) {
    const Node& node = model.nodes.at(node_id);
    const int m = static_cast<int>(node.children.size());

    // Alternatives offered by each child subtree.
    std::vector<std::vector<AltInfo>> alts(m);
    for (int c = 0; c < m; ++c) {
      const Node& child = model.nodes.at(node.children[c]);
      if (child.kind == NodeKind::Group) {
        for (const DesignAlternative& da : child.alternatives) {
          AltInfo info;
          info.id = da.id;
          info.priority = da.priority;
          info.internal_w = model.compat_levels;
          info.leaves = {da.id};
          info.leaf_priorities = {da.priority};
          info.profile[child.id] = da.id;
          alts[c].push_back(std::move(info));
        }
      } else {
        // The propagated set was already restricted to the requested layers.
        const NodeSynthesis& below =
            result.nodes[synthesized.at(child.id)];
        for (const CompositeDa& cda : below.propagated) {
          AltInfo info;
          info.id = cda.solution.name;
          info.priority = cda.priority;
          info.internal_w = cda.solution.quality.w;
          info.profile = cda.solution.leaf_profile;
          for (const auto& [gid, da] : cda.solution.leaf_profile) {
            info.leaves.push_back(da);
            info.leaf_priorities.push_back(
                find_da(model, da)->priority);
          }
          alts[c].push_back(std::move(info));
        }
      }
    }

    // Pairwise minimum compatibility between child alternatives, resolved at
    // this scope through the leaf constituents.
    std::vector<std::vector<std::vector<std::vector<int>>>> pairw(m);
    for (int i = 0; i < m; ++i) {
      pairw[i].resize(m);
      for (int j = i + 1; j < m; ++j) {
        pairw[i][j].assign(alts[i].size(),
                           std::vector<int>(alts[j].size(), 0));
        for (std::size_t ai = 0; ai < alts[i].size(); ++ai)
          for (std::size_t aj = 0; aj < alts[j].size(); ++aj) {
            int w = model.compat_levels;
            for (const DaId& la : alts[i][ai].leaves) {
              for (const DaId& lb : alts[j][aj].leaves) {
                w = std::min(w, table.resolve(la, lb));
                if (w == 0) break;
              }
              if (w == 0) break;
            }
            pairw[i][j][ai][aj] = w;
          }
      }
    }

    NodeSynthesis ns;
    ns.node = node_id;
    ns.space = 1;
    for (int c = 0; c < m; ++c) ns.space *= alts[c].size();

    // Enumerate selections with the first child cycling fastest, pruning as
    // soon as the running minimum compatibility hits zero.
    std::vector<Candidate> candidates;
    std::vector<int> digits(m, 0);
    std::function<void(int, int)> enumerate = [&](int child, int running_w) {
      if (child < 0) {
        Candidate cand;
        cand.digits = digits;
        cand.quality.w = running_w;
        cand.quality.counts.assign(model.priority_levels, 0);
        for (int c = 0; c < m; ++c) {
          const AltInfo& a = alts[c][digits[c]];
          if (options.flatten_quality)
            for (int lp : a.leaf_priorities)
              cand.quality.counts.at(lp - 1) += 1;
          else
            cand.quality.counts.at(a.priority - 1) += 1;
        }
        candidates.push_back(std::move(cand));
        return;
      }
      for (int a = 0; a < static_cast<int>(alts[child].size()); ++a) {
        digits[child] = a;
        int w = running_w;
        if (options.flatten_quality)
          w = std::min(w, alts[child][a].internal_w);
        for (int other = child + 1; other < m && w > 0; ++other)
          w = std::min(w, pairw[child][other][a][digits[other]]);
        if (w == 0) continue;
        enumerate(child - 1, w);
      }
    };
    if (ns.space > 0) enumerate(m - 1, model.compat_levels);
    ns.admissible = candidates.size();
    if (candidates.empty())
      throw Error(Errc::empty_front,
                  "no admissible compositions at node '" + node_id + "'");

    std::vector<QualityVector> qualities;
    qualities.reserve(candidates.size());
    for (const Candidate& c : candidates) qualities.push_back(c.quality);
    const std::vector<int> layers =
        peel_layers(qualities, std::max(options.propagate_layers, 1));

    // Name retained candidates layer by layer in enumeration order; layer 1
    // is the Pareto front of the node.
    auto materialize = [&](const Candidate& cand,
                           const std::string& name) -> CompositeSolution {
      CompositeSolution s;
      s.node = node_id;
      s.name = name;
      s.quality = cand.quality;
      for (int c = 0; c < m; ++c) {
        const AltInfo& a = alts[c][cand.digits[c]];
        s.selection.push_back(a.id);
        for (const auto& [gid, da] : a.profile) s.leaf_profile[gid] = da;
      }
      return s;
    };

    int ordinal = 0;
    const int max_layer = std::max(options.propagate_layers, 1);
    for (int layer = 1; layer <= max_layer; ++layer)
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (layers[i] != layer) continue;
        CompositeSolution solution = materialize(
            candidates[i], node_id + std::to_string(++ordinal));
        if (layer == 1) ns.front.push_back(solution);
        ns.propagated.push_back(
            {std::move(solution), std::min(layer, model.priority_levels)});
      }

    synthesized[node_id] = result.nodes.size();
    result.nodes.push_back(std::move(ns));
  }

  return result;
}

std::uint64_t brute_force_cap() {
  if (const char* env = std::getenv("MORPH_BRUTE_CAP")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return 1'000'000;
}

std::vector<CompositeSolution> brute_force_synthesize(
    const SystemModel& model) {
  return brute_force_synthesize(model, brute_force_cap());
}

std::vector<CompositeSolution> brute_force_synthesize(const SystemModel& model,
                                                      std::uint64_t cap) {
  const std::uint64_t space = count_design_space(model);
  if (space > cap)
    throw Error(Errc::cap_exceeded,
                "design space of " + std::to_string(space) +
                    " exceeds the enumeration cap of " + std::to_string(cap));

  const std::vector<NodeId> groups = leaf_groups_preorder(model);
  const int m = static_cast<int>(groups.size());
  std::vector<const std::vector<DesignAlternative>*> das(m);
  for (int g = 0; g < m; ++g)
    das[g] = &model.nodes.at(groups[g]).alternatives;

  const CompatTable table(model);
  std::vector<int> digits(m, 0);
  std::vector<std::pair<std::uint64_t, QualityVector>> admissible;

  for (std::uint64_t t = 0; t < space; ++t) {
    {
      std::uint64_t rest = t;
      for (int g = 0; g < m; ++g) {  // first group cycles fastest
        digits[g] = static_cast<int>(rest % das[g]->size());
        rest /= das[g]->size();
      }
    }
    int w = model.compat_levels;
    for (int i = 0; i < m && w > 0; ++i)
      for (int j = i + 1; j < m && w > 0; ++j)
        w = std::min(w, table.resolve((*das[i])[digits[i]].id,
                                      (*das[j])[digits[j]].id));
    if (w == 0) continue;
    QualityVector q;
    q.w = w;
    q.counts.assign(model.priority_levels, 0);
    for (int g = 0; g < m; ++g)
      q.counts[(*das[g])[digits[g]].priority - 1] += 1;
    admissible.emplace_back(t, std::move(q));
  }

  std::vector<QualityVector> qualities;
  qualities.reserve(admissible.size());
  for (const auto& [t, q] : admissible) qualities.push_back(q);
  const std::vector<int> layers = peel_layers(qualities, 1);

  std::vector<CompositeSolution> front;
  for (std::size_t i = 0; i < admissible.size(); ++i) {
    if (layers[i] != 1) continue;
    CompositeSolution s;
    s.node = model.root;
    s.name = "#" + std::to_string(admissible[i].first);
    s.quality = admissible[i].second;
    std::uint64_t rest = admissible[i].first;
    for (int g = 0; g < m; ++g) {
      const DesignAlternative& da = (*das[g])[rest % das[g]->size()];
      rest /= das[g]->size();
      s.selection.push_back(da.id);
      s.leaf_profile[groups[g]] = da.id;
    }
    front.push_back(std::move(s));
  }
  return front;
}

}  // namespace morph
