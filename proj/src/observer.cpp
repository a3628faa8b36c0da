#include "pgplan/observer.hpp"

#include <deque>
#include <tuple>

#include "pgplan/detail/indexed_graph.hpp"
#include "pgplan/errors.hpp"

namespace pgplan {

ObserverPair make_observer_pair(PGraph istate_graph, PGraph divulged, const PGraph& world,
                                const LabelMap& h, std::size_t check_bound, const Plan* plan) {
  if (check_bound > 0) {
    for (const auto& s : language_upto(world, check_bound)) {
      const Execution image = h.apply(s);
      if (reached_vertices(istate_graph, image).empty())
        throw InputError("I-state graph cannot trace the image of world execution " +
                         join_execution(s));
    }
    if (plan != nullptr) {
      for (const auto& s : language_upto(plan->graph, check_bound)) {
        if (reached_vertices(divulged, s).empty())
          throw InputError("divulged plan cannot trace plan execution " + join_execution(s));
      }
    }
  }
  return ObserverPair{std::move(istate_graph), std::move(divulged)};
}

PGraph finest_observer(const PGraph& world, const LabelMap& h) { return image_graph(h, world); }

PGraph divulged_plan_exact(const Plan& plan) { return plan.graph; }

PGraph divulged_plan_collection(const std::vector<Plan>& plans) {
  if (plans.empty()) throw InputError("divulged plan collection is empty");
  PGraph out;
  std::optional<Kind> initial_kind;
  for (std::size_t i = 0; i < plans.size(); ++i) {
    const PGraph& g = plans[i].graph;
    for (const auto& a : g.actions()) out.declare_action(a);
    for (const auto& o : g.observations()) out.declare_observation(o);
    const std::string prefix = "p" + std::to_string(i) + ":";
    for (const auto& [v, kind] : g.vertices()) {
      const bool initial = g.initial().count(v) != 0;
      if (initial) {
        if (initial_kind && *initial_kind != kind)
          throw InputError("plans in the collection start at different vertex kinds");
        initial_kind = kind;
      }
      out.add_vertex(prefix + v, kind, initial);
    }
    for (const auto& [from, targets] : g.adjacency()) {
      for (const auto& [to, labels] : targets) out.add_edge(prefix + from, prefix + to, labels);
    }
  }
  return out;
}

PGraph divulged_plan_world(const PGraph& world) { return world; }

BeliefContext::BeliefContext(const PGraph& istate_graph, const PGraph& divulged,
                             const PGraph& world, const LabelMap& h)
    : istate_graph_(istate_graph), world_(world), h_(h) {
  // State-determined preimage of I: every preimage execution reaches exactly
  // one vertex of it, and that vertex records the I-subset the image reaches.
  const SdeGraph isde = sde(istate_graph);
  const PGraph tracking = preimage_graph(h, isde.graph);

  const detail::IndexedGraph ti(tracking);
  const detail::IndexedGraph di(divulged);
  const detail::IndexedGraph wi(world);

  const std::size_t nd = di.ids.size();
  const std::size_t nw = wi.ids.size();
  auto encode = [&](int i, int d, int w) {
    return (static_cast<std::uint64_t>(i) * nd + d) * nw + w;
  };

  // Group reachable (i, d, w) product states by the I-subset of i.
  std::map<int, std::set<int>> worlds_by_tracking;
  std::set<std::uint64_t> seen;
  std::deque<std::tuple<int, int, int>> queue;
  for (int i : ti.initials) {
    for (int d : di.initials) {
      for (int w : wi.initials) {
        if (seen.insert(encode(i, d, w)).second) queue.push_back({i, d, w});
      }
    }
  }
  while (!queue.empty()) {
    auto [i, d, w] = queue.front();
    queue.pop_front();
    worlds_by_tracking[i].insert(w);
    for (const auto& [event, itargets] : ti.succ[i]) {
      auto dit = di.succ[d].find(event);
      if (dit == di.succ[d].end()) continue;
      auto wit = wi.succ[w].find(event);
      if (wit == wi.succ[w].end()) continue;
      for (int i2 : itargets) {
        for (int d2 : dit->second) {
          for (int w2 : wit->second) {
            if (seen.insert(encode(i2, d2, w2)).second) queue.push_back({i2, d2, w2});
          }
        }
      }
    }
  }
  product_states_ = seen.size();

  for (const auto& [i, worlds] : worlds_by_tracking) {
    const std::set<VertexId>& subset = isde.subset.at(ti.ids[i]);
    Belief& belief = belief_by_subset_[subset];
    for (int w : worlds) belief.insert(wi.ids[w]);
  }
}

Belief BeliefContext::estimated_world_states(const std::set<VertexId>& B,
                                             bool* unreachable) const {
  for (const auto& v : B) {
    if (!istate_graph_.has_vertex(v))
      throw InputError("belief query names '" + v + "', not a vertex of the I-state graph");
  }
  if (unreachable != nullptr) *unreachable = false;
  auto it = belief_by_subset_.find(B);
  if (it == belief_by_subset_.end()) {
    if (unreachable != nullptr) *unreachable = true;
    return {};
  }
  return it->second;
}

Belief BeliefContext::belief_after(const Execution& s) const {
  if (reached_vertices(world_, s).empty())
    throw InputError("execution " + join_execution(s) + " is not an execution of the world");
  const std::set<VertexId> B = reached_vertices(istate_graph_, h_.apply(s));
  return estimated_world_states(B);
}

Belief estimated_world_states(const PGraph& istate_graph, const PGraph& divulged,
                              const PGraph& world, const LabelMap& h,
                              const std::set<VertexId>& B) {
  return BeliefContext(istate_graph, divulged, world, h).estimated_world_states(B);
}

Belief belief_after(const PGraph& istate_graph, const PGraph& divulged, const PGraph& world,
                    const LabelMap& h, const Execution& s) {
  return BeliefContext(istate_graph, divulged, world, h).belief_after(s);
}

}  // namespace pgplan
