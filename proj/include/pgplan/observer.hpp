#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "pgplan/labelmap.hpp"
#include "pgplan/pgraph.hpp"
#include "pgplan/planning.hpp"

namespace pgplan {

// The observer's estimate: a set of world states.
using Belief = std::set<VertexId>;

// The observer: an I-state graph over the image space and a divulged plan
// over the preimage space.
struct ObserverPair {
  PGraph istate_graph;
  PGraph divulged;
};

// Builds the pair and checks its language invariants up to `check_bound`:
// L(I) must cover h[L(W)], and L(D) must cover L(P) when a plan is supplied.
// A bound of 0 skips the checks.
ObserverPair make_observer_pair(PGraph istate_graph, PGraph divulged, const PGraph& world,
                                const LabelMap& h, std::size_t check_bound,
                                const Plan* plan = nullptr);

// The image of the world under h: the I-state graph with the smallest
// possible beliefs for every observation stream.
PGraph finest_observer(const PGraph& world, const LabelMap& h);

// Divulged-plan constructions: the observer knows the exact plan, that the
// plan is one of a finite collection, or only the world itself.
PGraph divulged_plan_exact(const Plan& plan);
PGraph divulged_plan_collection(const std::vector<Plan>& plans);
PGraph divulged_plan_world(const PGraph& world);

// Answers estimated-world-state queries against one (I, D, W, h) by building
// the synchronized product of the state-determined preimage of I with D and
// W once, then grouping reachable product states by I-subset. Immutable after
// construction; share freely across readers.
class BeliefContext {
 public:
  BeliefContext(const PGraph& istate_graph, const PGraph& divulged, const PGraph& world,
                const LabelMap& h);

  // World states compatible with the I-state set B. B must be a subset of
  // V(I); a B unreachable in I yields the empty belief and sets the flag.
  Belief estimated_world_states(const std::set<VertexId>& B, bool* unreachable = nullptr) const;

  // Belief after a concrete execution of the world (preimage space).
  Belief belief_after(const Execution& s) const;

  const PGraph& istate_graph() const { return istate_graph_; }
  std::size_t product_size() const { return product_states_; }

 private:
  PGraph istate_graph_;
  PGraph world_;
  LabelMap h_;
  std::map<std::set<VertexId>, Belief> belief_by_subset_;
  std::size_t product_states_ = 0;
};

// One-shot conveniences over BeliefContext.
Belief estimated_world_states(const PGraph& istate_graph, const PGraph& divulged,
                              const PGraph& world, const LabelMap& h,
                              const std::set<VertexId>& B);
Belief belief_after(const PGraph& istate_graph, const PGraph& divulged, const PGraph& world,
                    const LabelMap& h, const Execution& s);

}  // namespace pgplan
