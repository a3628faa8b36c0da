#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pgplan/labelmap.hpp"
#include "pgplan/observer.hpp"
#include "pgplan/pgraph.hpp"
#include "pgplan/planning.hpp"
#include "pgplan/search_common.hpp"
#include "pgplan/stipulation.hpp"

namespace pgplan {

// Verdict of the standalone verifier: does the plan solve the problem and
// does the stipulation hold at every belief reached along joint prefixes?
struct CheckVerdict {
  bool ok = false;
  std::string diagnostic;
  std::optional<Execution> witness;  // a violating execution, when one exists
};

CheckVerdict check(const PlanningProblem& problem, const Plan& plan, const PGraph& divulged,
                   const PGraph& istate_graph, const LabelMap& h, const Formula& stipulation,
                   SearchStats* stats = nullptr);

// Synchronized product of the world, the (determinized) divulged plan and the
// state-determined preimage of the I-state graph. Deterministic: every joint
// execution reaches exactly one node.
struct TripleGraph {
  struct Node {
    VertexId w, d, i;
    Kind tier = Kind::Action;
    bool goal = false;
    bool phi_sat = false;
  };
  std::vector<Node> nodes;
  std::vector<std::map<Event, int>> succ;
  int initial = -1;
  // Per tracking vertex: the I-subset it stands for and the estimated world
  // states attached to it (world components co-reachable with it).
  std::map<VertexId, std::set<VertexId>> i_subset;
  std::map<VertexId, Belief> belief_by_i;
};

// Requires a state-determined world. `node_budget` caps node creation.
TripleGraph build_triple_graph(const PGraph& world, const PGraph& divulged,
                               const PGraph& istate_graph, const LabelMap& h,
                               SearchStats* stats = nullptr,
                               std::uint64_t node_budget = std::numeric_limits<std::uint64_t>::max());

// Marks each node as goal (world component in the goal region) and as
// satisfying the stipulation (evaluated on the belief of its i component).
void annotate_triple(TripleGraph& t, const std::set<VertexId>& goal, const Formula& stipulation,
                     SearchStats* stats = nullptr);

struct SeekPConfig {
  // Maximum plan depth in events; defaults to |V(W)| * |V(D)| * |V(sde(I))|.
  std::optional<std::size_t> depth_bound;
  std::uint64_t node_budget = std::numeric_limits<std::uint64_t>::max();
};

struct SeekPResult {
  SeekOutcome outcome = SeekOutcome::None;
  std::optional<Plan> plan;
  std::string message;
  SearchStats stats;
};

// AND-OR search on the triple graph: action nodes choose a single action (or
// terminate at goal states), observation nodes must succeed for every world
// observation. Returns a tree-shaped congruent plan of depth within the
// bound, `None` when no plan exists at any depth, or `Inconclusive` when the
// budget or depth bound cut the search short.
SeekPResult seek_plan(const PlanningProblem& problem, const ObserverPair& observer,
                      const LabelMap& h, const Formula& stipulation,
                      const SeekPConfig& config = {});

}  // namespace pgplan
