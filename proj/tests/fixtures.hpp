#pragma once

#include <string>
#include <vector>

#include "pgplan/pgraph.hpp"

namespace pgplan::tests {

inline Execution exec(std::initializer_list<const char*> events) {
  Execution s;
  for (const auto* e : events) s.emplace_back(e);
  return s;
}

// The running example: v0 branches on a1/a2 into two observation vertices;
// o1 from the a2 branch lands nondeterministically on w3 or w4, while the a1
// branch pins w3.
inline PGraph fig3_graph() {
  PGraph g;
  g.declare_action("a1");
  g.declare_action("a2");
  g.declare_observation("o1");
  g.add_vertex("v0", Kind::Action, true);
  g.add_vertex("v1", Kind::Observation);
  g.add_vertex("v2", Kind::Observation);
  g.add_vertex("w3", Kind::Action);
  g.add_vertex("w4", Kind::Action);
  g.add_edge("v0", "v1", {"a1"});
  g.add_edge("v0", "v2", {"a2"});
  g.add_edge("v1", "w3", {"o1"});
  g.add_edge("v2", "w3", {"o1"});
  g.add_edge("v2", "w4", {"o1"});
  return g;
}

// One action to the goal, one observation back: the smallest solvable world.
inline PGraph single_path_world() {
  PGraph g;
  g.declare_action("go");
  g.declare_observation("ok");
  g.add_vertex("s", Kind::Action, true);
  g.add_vertex("m", Kind::Observation);
  g.add_vertex("g", Kind::Action);
  g.add_edge("s", "m", {"go"});
  g.add_edge("m", "g", {"ok"});
  return g;
}

}  // namespace pgplan::tests
