#pragma once

#include <set>
#include <string>

#include "pgplan/pgraph.hpp"

namespace pgplan {

struct PlanningProblem {
  PGraph world;
  std::set<VertexId> goal;
};

struct Plan {
  PGraph graph;
  std::set<VertexId> term;
};

struct SolvesVerdict {
  bool solves = false;
  std::string diagnostic;  // names the first violated condition and a witness pair
};

// Checks the four solving conditions over the reachable joint product of plan
// and world, with termination pairs absorbing:
//   1. every action the plan offers is available in the world,
//   2. every observation the world can produce is handled by the plan,
//   3. termination only happens at goal states,
//   4. every non-terminated pair can still reach termination,
// plus acyclicity of the non-terminated reachable product, which realizes the
// finite bound on joint-execution length.
SolvesVerdict check_solves(const Plan& plan, const PlanningProblem& problem);

// True iff every execution of the plan graph has length <= c.
bool is_c_bounded(const Plan& plan, std::size_t c);

// BFS unrolling into a tree plan: no two executions reach the same vertex, so
// the result respects the execution equivalence of any world graph. The
// bounded language is preserved up to depth_bound.
Plan congruent_tree(const Plan& plan, std::size_t depth_bound);

}  // namespace pgplan
