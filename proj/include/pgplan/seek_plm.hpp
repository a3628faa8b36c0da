#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "pgplan/labelmap.hpp"
#include "pgplan/observer.hpp"
#include "pgplan/pgraph.hpp"
#include "pgplan/planning.hpp"
#include "pgplan/search_common.hpp"
#include "pgplan/stipulation.hpp"

namespace pgplan {

// Observer-side belief transition for one action block: world states reached
// from a non-terminated member of `belief` by a chosen action that shares the
// block's image. An empty result just marks a dead branch.
Belief belief_step_action(const PGraph& world, const Belief& belief,
                          const std::map<VertexId, std::set<Event>>& actions_chosen,
                          const std::set<Event>& block, const std::set<VertexId>& term_states);

// The observation-tier analogue over the observations available at the
// belief's members.
Belief belief_step_observation(const PGraph& world, const Belief& belief,
                               const std::set<VertexId>& term_states,
                               const std::set<Event>& block);

struct SeekPlmConfig {
  std::uint64_t node_budget = std::numeric_limits<std::uint64_t>::max();
  // Partition exploration order per tier; the defaults try coarser maps first
  // for actions (obfuscate more) and finer maps first for observations
  // (disclose task-relevant information).
  bool actions_coarsest_first = true;
  bool observations_finest_first = true;
};

struct SeekPlmResult {
  SeekOutcome outcome = SeekOutcome::None;
  std::optional<Plan> plan;
  std::optional<LabelMap> map;
  std::string message;
  SearchStats stats;
};

// Joint synthesis of a plan and a label map for the finest observer with the
// plan itself divulged. Two-tier OR/AND search over (world state, belief)
// plan states: action nodes choose per-member action sets and a partition of
// the chosen actions, observation nodes choose a partition of the available
// observations; partial maps consolidate across branches and conflicts
// backtrack. Every returned pair passes `check` with D = P and I = h<W>.
SeekPlmResult seek_plan_and_map(const PlanningProblem& problem, const Formula& stipulation,
                                const SeekPlmConfig& config = {});

}  // namespace pgplan
