#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "generators.hpp"
#include "pgplan/errors.hpp"
#include "pgplan/planning.hpp"

using namespace pgplan;
using namespace pgplan::tests;

namespace {

PlanningProblem single_path_problem() {
  PlanningProblem p;
  p.world = single_path_world();
  p.goal = {"g"};
  return p;
}

Plan single_path_plan() {
  Plan plan;
  plan.graph.declare_action("go");
  plan.graph.declare_observation("ok");
  plan.graph.add_vertex("p0", Kind::Action, true);
  plan.graph.add_vertex("p1", Kind::Observation);
  plan.graph.add_vertex("p2", Kind::Action);
  plan.graph.add_edge("p0", "p1", {"go"});
  plan.graph.add_edge("p1", "p2", {"ok"});
  plan.term = {"p2"};
  return plan;
}

// A world with a loop and no reachable termination for looping plans.
PGraph looped_world() {
  PGraph w;
  w.declare_action("spin");
  w.declare_observation("tick");
  w.add_vertex("u", Kind::Action, true);
  w.add_vertex("y", Kind::Observation);
  w.add_edge("u", "y", {"spin"});
  w.add_edge("y", "u", {"tick"});
  return w;
}

}  // namespace

TEST_CASE("a matching single-path plan solves") {
  const SolvesVerdict v = check_solves(single_path_plan(), single_path_problem());
  CHECK(v.solves);
  CHECK(v.diagnostic.empty());
}

TEST_CASE("terminating outside the goal violates condition 3") {
  Plan plan = single_path_plan();
  plan.term = {"p0"};
  const SolvesVerdict v = check_solves(plan, single_path_problem());
  CHECK_FALSE(v.solves);
  CHECK(v.diagnostic.find("condition 3") != std::string::npos);
}

TEST_CASE("a looping plan with unreachable termination is not a solution") {
  PlanningProblem problem;
  problem.world = looped_world();
  problem.goal = {"u"};
  Plan plan;
  plan.graph = looped_world();
  plan.term = {};  // never terminates
  const SolvesVerdict v = check_solves(plan, problem);
  CHECK_FALSE(v.solves);
  CHECK((v.diagnostic.find("cycle") != std::string::npos ||
         v.diagnostic.find("condition 4") != std::string::npos));
}

TEST_CASE("plan actions missing from the world violate condition 1") {
  PlanningProblem problem = single_path_problem();
  Plan plan = single_path_plan();
  plan.graph.declare_action("teleport");
  plan.graph.add_vertex("p3", Kind::Observation);
  plan.graph.add_edge("p0", "p3", {"teleport"});
  // The world has no 'teleport' edge anywhere.
  problem.world.declare_action("teleport");
  const SolvesVerdict v = check_solves(plan, problem);
  CHECK_FALSE(v.solves);
  CHECK(v.diagnostic.find("condition 1") != std::string::npos);
}

TEST_CASE("world observations unhandled by the plan violate condition 2") {
  PlanningProblem problem = single_path_problem();
  problem.world.declare_observation("err");
  problem.world.add_vertex("gerr", Kind::Action);
  problem.world.add_edge("m", "gerr", {"err"});
  problem.goal.insert("gerr");
  const SolvesVerdict v = check_solves(single_path_plan(), problem);
  CHECK_FALSE(v.solves);
  CHECK(v.diagnostic.find("condition 2") != std::string::npos);
}

TEST_CASE("is_c_bounded measures the longest execution") {
  Plan plan = single_path_plan();
  CHECK(is_c_bounded(plan, 2));
  CHECK_FALSE(is_c_bounded(plan, 1));

  Plan looped;
  looped.graph = looped_world();
  CHECK_FALSE(is_c_bounded(looped, 1000));
}

TEST_CASE("congruent_tree keeps trees isomorphic") {
  const Plan plan = single_path_plan();
  const Plan tree = congruent_tree(plan, 5);
  CHECK(language_upto(tree.graph, 5) == language_upto(plan.graph, 5));
  CHECK(tree.graph.vertex_count() == plan.graph.vertex_count());
  CHECK(tree.term.size() == 1);
}

TEST_CASE("congruent_tree splits merged executions") {
  // Two executions merge at vertex m; the unrolling must separate them while
  // preserving the bounded language.
  Plan plan;
  plan.graph.declare_action("a");
  plan.graph.declare_action("b");
  plan.graph.declare_observation("o");
  plan.graph.add_vertex("r", Kind::Action, true);
  plan.graph.add_vertex("x", Kind::Observation);
  plan.graph.add_vertex("y", Kind::Observation);
  plan.graph.add_vertex("m", Kind::Action);
  plan.graph.add_edge("r", "x", {"a"});
  plan.graph.add_edge("r", "y", {"b"});
  plan.graph.add_edge("x", "m", {"o"});
  plan.graph.add_edge("y", "m", {"o"});
  plan.term = {"m"};

  const Plan tree = congruent_tree(plan, 4);
  CHECK(language_upto(tree.graph, 4) == language_upto(plan.graph, 4));
  // Strict tree: every execution reaches exactly one vertex, every vertex has
  // at most one parent.
  for (const auto& s : language_upto(tree.graph, 4)) {
    CHECK(reached_vertices(tree.graph, s).size() == 1);
  }
  std::map<VertexId, int> parents;
  for (const auto& [from, targets] : tree.graph.adjacency()) {
    for (const auto& [to, labels] : targets) parents[to] += 1;
  }
  for (const auto& [v, n] : parents) CHECK(n <= 1);
  // The merge point was duplicated.
  CHECK(tree.graph.vertex_count() == 5);
  CHECK(tree.term.size() == 2);
}

TEST_CASE("congruent_tree preserves a DAG's bounded language") {
  // Shared suffix through vertex s.
  Plan plan;
  plan.graph.declare_action("a");
  plan.graph.declare_action("b");
  plan.graph.declare_action("c");
  plan.graph.declare_observation("o");
  plan.graph.add_vertex("r", Kind::Action, true);
  plan.graph.add_vertex("x", Kind::Observation);
  plan.graph.add_vertex("y", Kind::Observation);
  plan.graph.add_vertex("s", Kind::Action);
  plan.graph.add_vertex("z", Kind::Observation);
  plan.graph.add_edge("r", "x", {"a"});
  plan.graph.add_edge("r", "y", {"b"});
  plan.graph.add_edge("x", "s", {"o"});
  plan.graph.add_edge("y", "s", {"o"});
  plan.graph.add_edge("s", "z", {"c"});
  plan.term = {};

  const Plan tree = congruent_tree(plan, 6);
  CHECK(language_upto(tree.graph, 6) == language_upto(plan.graph, 6));
  CHECK(language_upto(tree.graph, 6).size() == 7);
}

TEST_CASE("congruent_tree of a solving plan still solves") {
  const PlanningProblem problem = single_path_problem();
  const Plan plan = single_path_plan();
  REQUIRE(check_solves(plan, problem).solves);
  const Plan tree = congruent_tree(plan, 4);
  CHECK(check_solves(tree, problem).solves);
}

TEST_CASE("shrinking the termination region cannot fix condition 3") {
  // Guard for the safe direction of monotonicity: a plan failing condition 3
  // still fails (or fails liveness) after dropping other terminal vertices.
  Plan plan = single_path_plan();
  plan.term = {"p0", "p2"};
  const PlanningProblem problem = single_path_problem();
  CHECK_FALSE(check_solves(plan, problem).solves);
  plan.term = {"p0"};
  CHECK_FALSE(check_solves(plan, problem).solves);
}
