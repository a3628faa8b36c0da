#include "pgplan/seek_p.hpp"

#include <algorithm>
#include <deque>
#include <queue>
#include <tuple>

#include "pgplan/detail/indexed_graph.hpp"
#include "pgplan/errors.hpp"

namespace pgplan {

const char* outcome_name(SeekOutcome o) {
  switch (o) {
    case SeekOutcome::Found: return "found";
    case SeekOutcome::None: return "none";
    case SeekOutcome::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

namespace {

void require_bound(const Formula& stipulation, const PGraph& world) {
  const auto unknown = unknown_symbols(stipulation, world);
  if (!unknown.empty())
    throw InputError("stipulation symbol '" + unknown.front() +
                     "' does not name a world vertex");
}

}  // namespace

CheckVerdict check(const PlanningProblem& problem, const Plan& plan, const PGraph& divulged,
                   const PGraph& istate_graph, const LabelMap& h, const Formula& stipulation,
                   SearchStats* stats) {
  require_bound(stipulation, problem.world);
  CheckVerdict verdict;
  const SolvesVerdict solves = check_solves(plan, problem);
  if (!solves.solves) {
    verdict.diagnostic = solves.diagnostic;
    return verdict;
  }

  // Traverse P x W x (state-determined preimage of I) to enumerate every
  // belief reached along joint prefixes; beliefs come from the independent
  // product in BeliefContext.
  const SdeGraph isde = sde(istate_graph);
  const PGraph tracking = preimage_graph(h, isde.graph);
  const BeliefContext context(istate_graph, divulged, problem.world, h);

  const detail::IndexedGraph pi(plan.graph);
  const detail::IndexedGraph wi(problem.world);
  const detail::IndexedGraph ti(tracking);

  std::set<int> term_indices;
  for (const auto& v : plan.term) {
    auto it = pi.index.find(v);
    if (it != pi.index.end()) term_indices.insert(it->second);
  }

  using Triple = std::tuple<int, int, int>;  // (plan, world, tracking)
  std::map<VertexId, bool> phi_by_tracking;
  std::map<Triple, std::pair<Triple, Event>> parent;
  std::set<Triple> seen;
  std::deque<Triple> queue;
  for (int p : pi.initials) {
    for (int w : wi.initials) {
      for (int t : ti.initials) {
        Triple triple{p, w, t};
        if (seen.insert(triple).second) queue.push_back(triple);
      }
    }
  }

  auto witness_of = [&](Triple triple) {
    Execution s;
    while (true) {
      auto it = parent.find(triple);
      if (it == parent.end()) break;
      s.push_back(it->second.second);
      triple = it->second.first;
    }
    std::reverse(s.begin(), s.end());
    return s;
  };

  while (!queue.empty()) {
    Triple triple = queue.front();
    queue.pop_front();
    const auto [p, w, t] = triple;

    const VertexId& tid = ti.ids[t];
    auto [phi_it, fresh] = phi_by_tracking.emplace(tid, false);
    if (fresh) {
      if (stats != nullptr) ++stats->beliefs_evaluated;
      phi_it->second =
          evaluate(stipulation, context.estimated_world_states(isde.subset.at(tid)));
    }
    if (!phi_it->second) {
      verdict.diagnostic = "stipulation fails at belief for I-states " + tid +
                           " reached by execution " + join_execution(witness_of(triple));
      verdict.witness = witness_of(triple);
      return verdict;
    }

    if (term_indices.count(p)) continue;  // plan halted; prefix already evaluated

    for (const auto& [event, ptargets] : pi.succ[p]) {
      auto wit = wi.succ[w].find(event);
      if (wit == wi.succ[w].end()) continue;
      auto tit = ti.succ[t].find(event);
      if (tit == ti.succ[t].end()) continue;
      for (int p2 : ptargets) {
        for (int w2 : wit->second) {
          for (int t2 : tit->second) {
            Triple next{p2, w2, t2};
            if (seen.insert(next).second) {
              parent.emplace(next, std::make_pair(triple, event));
              queue.push_back(next);
            }
          }
        }
      }
    }
  }

  verdict.ok = true;
  return verdict;
}

TripleGraph build_triple_graph(const PGraph& world, const PGraph& divulged,
                               const PGraph& istate_graph, const LabelMap& h, SearchStats* stats,
                               std::uint64_t node_budget) {
  if (!is_state_determined(world))
    throw InputError("the world graph must be state-determined; expand it first");

  // Determinize the divulged plan so each joint execution reaches exactly one
  // node; this preserves its language and hence every belief.
  const SdeGraph dsde = sde(divulged);
  const SdeGraph isde = sde(istate_graph);
  const PGraph tracking = preimage_graph(h, isde.graph);

  const detail::IndexedGraph wi(world);
  const detail::IndexedGraph di(dsde.graph);
  const detail::IndexedGraph ti(tracking);

  TripleGraph t;
  t.i_subset = isde.subset;

  std::map<std::tuple<int, int, int>, int> node_of;
  std::vector<std::tuple<int, int, int>> parts;  // node id -> component indices
  std::deque<int> queue;
  auto intern = [&](int w, int d, int i) -> int {
    auto key = std::make_tuple(w, d, i);
    auto it = node_of.find(key);
    if (it != node_of.end()) return it->second;
    if (stats != nullptr && stats->nodes_expanded >= node_budget)
      throw BudgetExceeded("triple graph exceeds the node budget");
    TripleGraph::Node node;
    node.w = wi.ids[w];
    node.d = di.ids[d];
    node.i = ti.ids[i];
    const Kind wk = wi.is_action[w] ? Kind::Action : Kind::Observation;
    const Kind dk = di.is_action[d] ? Kind::Action : Kind::Observation;
    const Kind ik = ti.is_action[i] ? Kind::Action : Kind::Observation;
    if (wk != dk || wk != ik)
      throw InputError("triple graph reached a tier mismatch at (" + node.w + ", " + node.d +
                       ", " + node.i + ")");
    node.tier = wk;
    const int id = static_cast<int>(t.nodes.size());
    t.nodes.push_back(std::move(node));
    t.succ.emplace_back();
    parts.push_back(key);
    node_of.emplace(key, id);
    queue.push_back(id);
    if (stats != nullptr) ++stats->nodes_expanded;
    t.belief_by_i[ti.ids[i]].insert(wi.ids[w]);
    return id;
  };

  t.initial = intern(wi.initials.at(0), di.initials.at(0), ti.initials.at(0));

  while (!queue.empty()) {
    const int id = queue.front();
    queue.pop_front();
    const auto [w, d, i] = parts[id];

    for (const auto& [event, wtargets] : wi.succ[w]) {
      auto dit = di.succ[d].find(event);
      if (dit == di.succ[d].end()) continue;
      auto iit = ti.succ[i].find(event);
      if (iit == ti.succ[i].end()) continue;
      // All three components are deterministic here.
      const int next = intern(wtargets.front(), dit->second.front(), iit->second.front());
      t.succ[id][event] = next;
    }
  }
  return t;
}

void annotate_triple(TripleGraph& t, const std::set<VertexId>& goal, const Formula& stipulation,
                     SearchStats* stats) {
  std::map<VertexId, bool> phi_by_i;
  for (const auto& [i, belief] : t.belief_by_i) {
    if (stats != nullptr) ++stats->beliefs_evaluated;
    phi_by_i.emplace(i, evaluate(stipulation, belief));
  }
  for (auto& node : t.nodes) {
    node.goal = goal.count(node.w) != 0;
    node.phi_sat = phi_by_i.at(node.i);
  }
}

namespace {

constexpr std::size_t kInfinity = std::numeric_limits<std::size_t>::max();

// Minimal plan depth from every node, by backward induction over the AND-OR
// structure: OR (action) nodes settle at 1 + the least settled successor,
// AND (observation) nodes at 1 + the greatest, once all world observations
// are covered and settled. Goal action nodes satisfying the stipulation seed
// the queue at depth 0 (terminate there).
std::vector<std::size_t> solve_ranks(const TripleGraph& t, const PGraph& world,
                                     SearchStats* stats, std::uint64_t node_budget,
                                     bool* budget_hit) {
  const std::size_t n = t.nodes.size();
  std::vector<std::size_t> rank(n, kInfinity);
  std::vector<std::vector<int>> preds(n);
  std::vector<std::size_t> pending(n, 0);   // distinct successors not yet settled (AND)
  std::vector<std::size_t> max_child(n, 0);
  std::vector<bool> covered(n, true);

  for (std::size_t id = 0; id < n; ++id) {
    std::set<int> distinct;
    for (const auto& [event, target] : t.succ[id]) distinct.insert(target);
    for (int target : distinct) preds[target].push_back(static_cast<int>(id));
    pending[id] = distinct.size();
    if (t.nodes[id].tier == Kind::Observation) {
      // Every observation the world can produce must have a joint successor.
      const auto world_obs = world.labels_from(t.nodes[id].w);
      covered[id] = world_obs.size() == t.succ[id].size();
    }
  }

  using Entry = std::pair<std::size_t, int>;  // (candidate rank, node)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
  for (std::size_t id = 0; id < n; ++id) {
    const auto& node = t.nodes[id];
    if (node.tier == Kind::Action && node.goal && node.phi_sat) pq.push({0, static_cast<int>(id)});
  }

  while (!pq.empty()) {
    auto [r, id] = pq.top();
    pq.pop();
    if (rank[id] != kInfinity) continue;
    if (stats != nullptr) {
      if (stats->nodes_expanded >= node_budget) {
        if (budget_hit != nullptr) *budget_hit = true;
        return rank;
      }
      ++stats->nodes_expanded;
    }
    rank[id] = r;
    for (int p : preds[id]) {
      if (rank[p] != kInfinity || !t.nodes[p].phi_sat) continue;
      if (t.nodes[p].tier == Kind::Action) {
        pq.push({r + 1, p});
      } else {
        if (!covered[p]) continue;
        max_child[p] = std::max(max_child[p], r);
        if (--pending[p] == 0) pq.push({max_child[p] + 1, p});
      }
    }
  }
  return rank;
}

// Materializes the chosen subtree as a tree plan. Edges to a shared successor
// carry merged label sets; the world component of the successor is shared, so
// congruence is preserved.
struct PlanBuilder {
  const TripleGraph& t;
  const std::vector<std::size_t>& rank;
  Plan plan;

  void build(const PGraph& world) {
    for (const auto& a : world.actions()) plan.graph.declare_action(a);
    for (const auto& o : world.observations()) plan.graph.declare_observation(o);
    emit(t.initial, "n", true);
  }

  void emit(int id, const VertexId& vertex, bool initial) {
    const auto& node = t.nodes[id];
    plan.graph.add_vertex(vertex, node.tier, initial);
    if (node.tier == Kind::Action) {
      if (node.goal && node.phi_sat && rank[id] == 0) {
        plan.term.insert(vertex);
        return;
      }
      // Lexicographically first action whose successor realizes the rank.
      for (const auto& [event, target] : t.succ[id]) {
        if (rank[target] != kInfinity && rank[target] + 1 == rank[id]) {
          const VertexId child = vertex + "/" + event;
          plan.graph.add_vertex(child, t.nodes[target].tier);
          plan.graph.add_edge(vertex, child, {event});
          emit(target, child, false);
          return;
        }
      }
      throw std::logic_error("plan extraction lost the chosen action");
    }
    // Observation tier: one child per distinct successor, labels merged.
    std::map<int, std::set<Event>> grouped;
    for (const auto& [event, target] : t.succ[id]) grouped[target].insert(event);
    for (const auto& [target, labels] : grouped) {
      std::string suffix;
      for (const auto& label : labels) {
        if (!suffix.empty()) suffix += "+";
        suffix += label;
      }
      const VertexId child = vertex + "/" + suffix;
      plan.graph.add_vertex(child, t.nodes[target].tier);
      plan.graph.add_edge(vertex, child, labels);
      emit(target, child, false);
    }
  }
};

}  // namespace

SeekPResult seek_plan(const PlanningProblem& problem, const ObserverPair& observer,
                      const LabelMap& h, const Formula& stipulation, const SeekPConfig& config) {
  SeekPResult result;
  require_bound(stipulation, problem.world);

  TripleGraph t;
  try {
    t = build_triple_graph(problem.world, observer.divulged, observer.istate_graph, h,
                           &result.stats, config.node_budget);
  } catch (const BudgetExceeded&) {
    result.outcome = SeekOutcome::Inconclusive;
    result.message = "node budget exhausted while building the triple graph";
    return result;
  }
  annotate_triple(t, problem.goal, stipulation, &result.stats);

  const std::size_t depth_bound = config.depth_bound.value_or(
      problem.world.vertex_count() * observer.divulged.vertex_count() *
      sde(observer.istate_graph).graph.vertex_count());

  bool budget_hit = false;
  const std::vector<std::size_t> rank =
      solve_ranks(t, problem.world, &result.stats, config.node_budget, &budget_hit);
  if (budget_hit) {
    result.outcome = SeekOutcome::Inconclusive;
    result.message = "node budget exhausted during the AND-OR search";
    return result;
  }

  if (rank[t.initial] == kInfinity) {
    result.outcome = SeekOutcome::None;
    result.message = "no plan satisfies the goal and stipulation at any depth";
    return result;
  }
  if (rank[t.initial] > depth_bound) {
    result.outcome = SeekOutcome::Inconclusive;
    result.message = "a plan exists at depth " + std::to_string(rank[t.initial]) +
                     " but the depth bound is " + std::to_string(depth_bound);
    return result;
  }

  PlanBuilder builder{t, rank, {}};
  builder.build(problem.world);
  result.outcome = SeekOutcome::Found;
  result.plan = std::move(builder.plan);
  result.message = "plan of depth " + std::to_string(rank[t.initial]);
  return result;
}

}  // namespace pgplan
