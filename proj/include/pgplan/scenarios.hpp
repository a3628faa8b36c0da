#pragma once

#include "pgplan/labelmap.hpp"
#include "pgplan/pgraph.hpp"
#include "pgplan/planning.hpp"
#include "pgplan/stipulation.hpp"

namespace pgplan {

// Nuclear site inspection on a 3x4 grid: the facility is one of two types
// with high or low radioactivity, the robot must measure at the cell matching
// the type and reach an exit, and the observer must learn the radioactivity
// but never the facility type. The planning problem carries the
// state-determined expansion of the raw world; goals are the exit states with
// the variant fully resolved.
struct NuclearScenario {
  PGraph raw_world;          // 96 vertices
  PlanningProblem problem;   // world = state-determined expansion (154 vertices)
  LabelMap map;              // canonical disclosure policy
  Formula phi;               // type-secrecy stipulation over expanded states
};

NuclearScenario build_nuclear();

// Pentagonal patrol world: five loop positions, a loop action a1, exit
// actions a2/a3 into two charging stations, and a stipulation that the
// observer must not tell the stations apart.
struct PentagonScenario {
  PlanningProblem problem;
  Formula phi;
};

PentagonScenario build_pentagon();

}  // namespace pgplan
