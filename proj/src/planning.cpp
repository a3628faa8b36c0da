#include "pgplan/planning.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "pgplan/errors.hpp"

namespace pgplan {

namespace {

using Pair = std::pair<VertexId, VertexId>;

std::string pair_text(const Pair& p) { return "(" + p.first + ", " + p.second + ")"; }

void check_alphabet_kinds(const PGraph& a, const PGraph& b) {
  for (const auto& u : a.actions()) {
    if (b.label_kind(u) == Kind::Observation)
      throw InputError("alphabets incompatible: '" + u + "' changes kind between graphs");
  }
  for (const auto& y : a.observations()) {
    if (b.label_kind(y) == Kind::Action)
      throw InputError("alphabets incompatible: '" + y + "' changes kind between graphs");
  }
}

}  // namespace

SolvesVerdict check_solves(const Plan& plan, const PlanningProblem& problem) {
  const PGraph& p = plan.graph;
  const PGraph& w = problem.world;
  if (p.initial().empty() || w.initial().empty())
    throw InputError("check_solves requires nonempty initial sets");
  check_alphabet_kinds(p, w);

  SolvesVerdict verdict;
  std::set<Pair> seen;
  std::deque<Pair> queue;
  std::map<Pair, std::set<Pair>> successors;
  std::set<Pair> terminated;

  for (const auto& pv : p.initial()) {
    for (const auto& wv : w.initial()) {
      Pair pair{pv, wv};
      if (seen.insert(pair).second) queue.push_back(pair);
    }
  }

  while (!queue.empty()) {
    Pair pair = queue.front();
    queue.pop_front();
    const auto& [pv, wv] = pair;

    if (plan.term.count(pv)) {
      terminated.insert(pair);
      if (!problem.goal.count(wv)) {
        verdict.diagnostic =
            "condition 3 violated at " + pair_text(pair) + ": plan terminates outside the goal";
        return verdict;
      }
      continue;  // termination absorbs; the joint execution stops here
    }

    const Kind pk = p.kind(pv);
    const Kind wk = w.kind(wv);
    if (pk == Kind::Action && wk == Kind::Action) {
      const auto plan_actions = p.labels_from(pv);
      const auto world_actions = w.labels_from(wv);
      for (const auto& a : plan_actions) {
        if (!world_actions.count(a)) {
          verdict.diagnostic = "condition 1 violated at " + pair_text(pair) + ": plan action '" +
                               a + "' is not available in the world";
          return verdict;
        }
      }
    } else if (pk == Kind::Observation && wk == Kind::Observation) {
      const auto plan_obs = p.labels_from(pv);
      const auto world_obs = w.labels_from(wv);
      for (const auto& o : world_obs) {
        if (!plan_obs.count(o)) {
          verdict.diagnostic = "condition 2 violated at " + pair_text(pair) +
                               ": world observation '" + o + "' is not handled by the plan";
          return verdict;
        }
      }
    }

    for (const auto& [pt, plabels] : p.edges_from(pv)) {
      for (const auto& [wt, wlabels] : w.edges_from(wv)) {
        std::set<Event> shared;
        std::set_intersection(plabels.begin(), plabels.end(), wlabels.begin(), wlabels.end(),
                              std::inserter(shared, shared.begin()));
        if (shared.empty()) continue;
        Pair next{pt, wt};
        successors[pair].insert(next);
        if (seen.insert(next).second) queue.push_back(next);
      }
    }
  }

  // Boundedness: no cycle may be reachable before termination. Kahn's
  // algorithm on the non-terminated reachable pairs.
  {
    std::map<Pair, std::size_t> indegree;
    for (const auto& pair : seen) {
      if (!terminated.count(pair)) indegree.emplace(pair, 0);
    }
    for (const auto& [from, nexts] : successors) {
      for (const auto& next : nexts) {
        auto it = indegree.find(next);
        if (it != indegree.end()) ++it->second;
      }
    }
    std::deque<Pair> ready;
    for (const auto& [pair, deg] : indegree) {
      if (deg == 0) ready.push_back(pair);
    }
    std::size_t processed = 0;
    while (!ready.empty()) {
      Pair pair = ready.front();
      ready.pop_front();
      ++processed;
      auto it = successors.find(pair);
      if (it == successors.end()) continue;
      for (const auto& next : it->second) {
        auto dit = indegree.find(next);
        if (dit != indegree.end() && --dit->second == 0) ready.push_back(next);
      }
    }
    if (processed != indegree.size()) {
      for (const auto& [pair, deg] : indegree) {
        if (deg != 0) {
          verdict.diagnostic = "joint-executions are unbounded: a cycle through " +
                               pair_text(pair) + " is reachable before termination";
          return verdict;
        }
      }
    }
  }

  // Liveness: every reachable non-terminated pair must co-reach termination.
  {
    std::map<Pair, std::set<Pair>> predecessors;
    for (const auto& [from, nexts] : successors) {
      for (const auto& next : nexts) predecessors[next].insert(from);
    }
    std::set<Pair> can_finish = terminated;
    std::deque<Pair> frontier(terminated.begin(), terminated.end());
    while (!frontier.empty()) {
      Pair pair = frontier.front();
      frontier.pop_front();
      for (const auto& prev : predecessors[pair]) {
        if (can_finish.insert(prev).second) frontier.push_back(prev);
      }
    }
    for (const auto& pair : seen) {
      if (!can_finish.count(pair)) {
        verdict.diagnostic = "condition 4 violated at " + pair_text(pair) +
                             ": no continuation reaches the termination region";
        return verdict;
      }
    }
  }

  verdict.solves = true;
  return verdict;
}

bool is_c_bounded(const Plan& plan, std::size_t c) {
  const PGraph& g = plan.graph;
  // Reachable subgraph.
  std::set<VertexId> reachable;
  std::deque<VertexId> queue(g.initial().begin(), g.initial().end());
  reachable.insert(g.initial().begin(), g.initial().end());
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    for (const auto& [to, labels] : g.edges_from(v)) {
      if (reachable.insert(to).second) queue.push_back(to);
    }
  }
  // Topological order; any cycle means unbounded executions.
  std::map<VertexId, std::size_t> indegree;
  for (const auto& v : reachable) indegree.emplace(v, 0);
  for (const auto& v : reachable) {
    for (const auto& [to, labels] : g.edges_from(v)) {
      if (reachable.count(to)) ++indegree[to];
    }
  }
  std::deque<VertexId> ready;
  for (const auto& [v, deg] : indegree) {
    if (deg == 0) ready.push_back(v);
  }
  std::vector<VertexId> order;
  while (!ready.empty()) {
    VertexId v = ready.front();
    ready.pop_front();
    order.push_back(v);
    for (const auto& [to, labels] : g.edges_from(v)) {
      if (reachable.count(to) && --indegree[to] == 0) ready.push_back(to);
    }
  }
  if (order.size() != reachable.size()) return false;  // reachable cycle

  std::map<VertexId, std::size_t> longest;
  for (const auto& v : g.initial()) longest[v] = 0;
  std::size_t max_len = 0;
  for (const auto& v : order) {
    auto it = longest.find(v);
    if (it == longest.end()) continue;  // not on a path from the initial set
    max_len = std::max(max_len, it->second);
    for (const auto& [to, labels] : g.edges_from(v)) {
      if (!reachable.count(to)) continue;
      auto [tit, inserted] = longest.emplace(to, it->second + 1);
      if (!inserted) tit->second = std::max(tit->second, it->second + 1);
    }
  }
  return max_len <= c;
}

Plan congruent_tree(const Plan& plan, std::size_t depth_bound) {
  const PGraph& g = plan.graph;
  if (g.initial().empty()) throw InputError("congruent_tree requires an initial set");

  Plan out;
  for (const auto& a : g.actions()) out.graph.declare_action(a);
  for (const auto& o : g.observations()) out.graph.declare_observation(o);

  auto members_kind = [&](const std::set<VertexId>& members) {
    std::optional<Kind> k;
    for (const auto& v : members) {
      Kind kv = g.kind(v);
      if (k && *k != kv) throw InputError("congruent_tree reached a mixed-kind vertex set");
      k = kv;
    }
    return *k;
  };
  auto touches_term = [&](const std::set<VertexId>& members) {
    return std::any_of(members.begin(), members.end(),
                       [&](const VertexId& v) { return plan.term.count(v) != 0; });
  };

  struct Node {
    VertexId id;
    std::set<VertexId> corr;
    std::size_t depth;
  };
  const VertexId root_id = "r";
  out.graph.add_vertex(root_id, members_kind(g.initial()), /*initial=*/true);
  if (touches_term(g.initial())) out.term.insert(root_id);

  std::deque<Node> queue{{root_id, g.initial(), 0}};
  while (!queue.empty()) {
    Node node = queue.front();
    queue.pop_front();
    if (node.depth >= depth_bound) continue;
    std::set<Event> available;
    for (const auto& v : node.corr) {
      auto labels = g.labels_from(v);
      available.insert(labels.begin(), labels.end());
    }
    for (const auto& event : available) {
      std::set<VertexId> corr = step(g, node.corr, event);
      if (corr.empty()) continue;
      const VertexId child_id = node.id + "." + event;
      out.graph.add_vertex(child_id, members_kind(corr));
      out.graph.add_edge(node.id, child_id, {event});
      if (touches_term(corr)) out.term.insert(child_id);
      queue.push_back({child_id, corr, node.depth + 1});
    }
  }
  return out;
}

}  // namespace pgplan
