#include "pgplan/seek_plm.hpp"

#include <algorithm>
#include <functional>
#include <memory>

#include "pgplan/errors.hpp"
#include "pgplan/observer.hpp"
#include "pgplan/seek_p.hpp"

namespace pgplan {

Belief belief_step_action(const PGraph& world, const Belief& belief,
                          const std::map<VertexId, std::set<Event>>& actions_chosen,
                          const std::set<Event>& block, const std::set<VertexId>& term_states) {
  Belief out;
  for (const auto& w : belief) {
    if (term_states.count(w)) continue;
    auto it = actions_chosen.find(w);
    if (it == actions_chosen.end()) continue;
    for (const auto& [to, labels] : world.edges_from(w)) {
      for (const auto& a : labels) {
        if (it->second.count(a) && block.count(a)) {
          out.insert(to);
          break;
        }
      }
    }
  }
  return out;
}

Belief belief_step_observation(const PGraph& world, const Belief& belief,
                               const std::set<VertexId>& term_states,
                               const std::set<Event>& block) {
  Belief out;
  for (const auto& w : belief) {
    if (term_states.count(w)) continue;
    for (const auto& [to, labels] : world.edges_from(w)) {
      for (const auto& o : labels) {
        if (block.count(o)) {
          out.insert(to);
          break;
        }
      }
    }
  }
  return out;
}

namespace {

// Scratch plan tree produced by the search; converted to a Plan on success.
struct TreeNode {
  Belief belief;
  Kind tier = Kind::Action;
  bool terminal = false;
  std::map<VertexId, std::set<Event>> actions;  // action tier, per member
  std::vector<std::pair<std::set<Event>, std::unique_ptr<TreeNode>>> children;
};

std::unique_ptr<TreeNode> clone_tree(const TreeNode& node) {
  auto out = std::make_unique<TreeNode>();
  out->belief = node.belief;
  out->tier = node.tier;
  out->terminal = node.terminal;
  out->actions = node.actions;
  for (const auto& [block, child] : node.children)
    out->children.emplace_back(block, clone_tree(*child));
  return out;
}

struct SearchSpace {
  const PGraph& world;
  const std::set<VertexId>& goal;
  const Formula& phi;
  const SeekPlmConfig& config;
  SearchStats* stats;

  // Receives one solved subtree plus the accumulated commitments; returns
  // true once some enclosing acceptor took a full candidate.
  using Emit = std::function<bool(std::unique_ptr<TreeNode>, const MapCommitments&)>;

  void charge_expansion() {
    if (stats->nodes_expanded >= config.node_budget)
      throw BudgetExceeded("seek_plm node budget exhausted");
    ++stats->nodes_expanded;
  }

  bool phi_holds(const Belief& belief) {
    ++stats->beliefs_evaluated;
    return evaluate(phi, belief);
  }

  Kind belief_tier(const Belief& belief) const {
    std::optional<Kind> tier;
    for (const auto& w : belief) {
      Kind k = world.kind(w);
      if (tier && *tier != k) throw InputError("belief mixes vertex kinds");
      tier = k;
    }
    return *tier;
  }

  std::vector<PartialLabelMap> ordered_partitions(const std::set<Event>& events,
                                                  bool coarsest_first) const {
    std::vector<PartialLabelMap> out;
    PartitionEnumerator it(events);
    while (auto p = it.next()) out.push_back(std::move(*p));
    auto canon = [](const PartialLabelMap& p) {
      std::string s;
      for (const auto& block : p.blocks()) {
        s += "[";
        for (const auto& e : block) s += e + ",";
        s += "]";
      }
      return s;
    };
    std::stable_sort(out.begin(), out.end(),
                     [&](const PartialLabelMap& a, const PartialLabelMap& b) {
                       const std::size_t na = a.blocks().size(), nb = b.blocks().size();
                       if (na != nb) return coarsest_first ? na < nb : na > nb;
                       return canon(a) < canon(b);
                     });
    return out;
  }

  // Every assignment of a nonempty action subset to each member, ordered by
  // total action count ascending, then lexicographically.
  std::vector<std::map<VertexId, std::set<Event>>> action_tuples(
      const Belief& belief, const std::map<VertexId, std::set<Event>>& available) const {
    std::vector<VertexId> members(belief.begin(), belief.end());
    std::vector<std::vector<std::set<Event>>> choices;
    std::uint64_t combinations = 1;
    for (const auto& w : members) {
      const auto& avail = available.at(w);
      std::vector<Event> events(avail.begin(), avail.end());
      std::vector<std::set<Event>> subsets;
      const std::size_t n = events.size();
      for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        std::set<Event> subset;
        for (std::size_t b = 0; b < n; ++b) {
          if (mask & (std::size_t{1} << b)) subset.insert(events[b]);
        }
        subsets.push_back(std::move(subset));
      }
      std::sort(subsets.begin(), subsets.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
      });
      combinations *= subsets.size();
      if (combinations > 2'000'000)
        throw BudgetExceeded("action tuple enumeration too large");
      choices.push_back(std::move(subsets));
    }

    std::vector<std::map<VertexId, std::set<Event>>> tuples;
    std::vector<std::size_t> odometer(members.size(), 0);
    while (true) {
      std::map<VertexId, std::set<Event>> tuple;
      for (std::size_t i = 0; i < members.size(); ++i) tuple[members[i]] = choices[i][odometer[i]];
      tuples.push_back(std::move(tuple));
      std::size_t i = members.size();
      while (i-- > 0) {
        if (++odometer[i] < choices[i].size()) break;
        odometer[i] = 0;
        if (i == 0) {
          std::stable_sort(tuples.begin(), tuples.end(), [](const auto& a, const auto& b) {
            std::size_t ta = 0, tb = 0;
            for (const auto& [w, s] : a) ta += s.size();
            for (const auto& [w, s] : b) tb += s.size();
            if (ta != tb) return ta < tb;
            return a < b;
          });
          return tuples;
        }
      }
      if (members.empty()) return tuples;
    }
  }

  // Solves the node for `belief`, calling `emit` once per solution found in
  // order; `emit` returns true when the overall search may stop.
  bool solve_node(const Belief& belief, const MapCommitments& acc, std::vector<Belief> path,
                  const Emit& emit) {
    charge_expansion();
    if (std::find(path.begin(), path.end(), belief) != path.end()) return false;
    if (!phi_holds(belief)) return false;
    path.push_back(belief);

    const Kind tier = belief_tier(belief);
    if (tier == Kind::Action) {
      if (std::includes(goal.begin(), goal.end(), belief.begin(), belief.end())) {
        auto node = std::make_unique<TreeNode>();
        node->belief = belief;
        node->tier = tier;
        node->terminal = true;
        return emit(std::move(node), acc);
      }
      std::map<VertexId, std::set<Event>> available;
      for (const auto& w : belief) {
        auto labels = world.labels_from(w);
        if (labels.empty()) return false;  // stuck member, cannot terminate here
        available.emplace(w, std::move(labels));
      }
      for (const auto& tuple : action_tuples(belief, available)) {
        std::set<Event> chosen_union;
        for (const auto& [w, s] : tuple) chosen_union.insert(s.begin(), s.end());
        for (const auto& partition : ordered_partitions(chosen_union, config.actions_coarsest_first)) {
          ++stats->partitions_tried;
          MapCommitments base = acc;
          if (!base.commit(partition)) continue;
          auto stepper = [&](const std::set<Event>& block) {
            return belief_step_action(world, belief, tuple, block, {});
          };
          if (solve_blocks(partition, 0, base, path, stepper,
                           [&](std::vector<std::pair<std::set<Event>, std::unique_ptr<TreeNode>>>
                                   children,
                               const MapCommitments& merged) {
                             auto node = std::make_unique<TreeNode>();
                             node->belief = belief;
                             node->tier = tier;
                             node->actions = tuple;
                             node->children = std::move(children);
                             return emit(std::move(node), merged);
                           }))
            return true;
        }
      }
      return false;
    }

    // Observation tier: the plan must handle every available observation.
    std::set<Event> observations;
    for (const auto& w : belief) {
      auto labels = world.labels_from(w);
      if (labels.empty()) return false;  // no observation ever arrives: dead branch
      observations.insert(labels.begin(), labels.end());
    }
    for (const auto& partition :
         ordered_partitions(observations, !config.observations_finest_first)) {
      ++stats->partitions_tried;
      MapCommitments base = acc;
      if (!base.commit(partition)) continue;
      auto stepper = [&](const std::set<Event>& block) {
        return belief_step_observation(world, belief, {}, block);
      };
      if (solve_blocks(partition, 0, base, path, stepper,
                       [&](std::vector<std::pair<std::set<Event>, std::unique_ptr<TreeNode>>>
                               children,
                           const MapCommitments& merged) {
                         auto node = std::make_unique<TreeNode>();
                         node->belief = belief;
                         node->tier = tier;
                         node->children = std::move(children);
                         return emit(std::move(node), merged);
                       }))
      return true;
    }
    return false;
  }

  using ChildrenEmit = std::function<bool(
      std::vector<std::pair<std::set<Event>, std::unique_ptr<TreeNode>>>, const MapCommitments&)>;

  // AND over the partition's blocks, threading the accumulated commitments
  // through the siblings; solutions for later blocks are explored within the
  // continuation of earlier ones.
  bool solve_blocks(const PartialLabelMap& partition, std::size_t index,
                    const MapCommitments& acc, const std::vector<Belief>& path,
                    const std::function<Belief(const std::set<Event>&)>& stepper,
                    const ChildrenEmit& emit) {
    if (index == partition.blocks().size()) return emit({}, acc);
    const std::set<Event>& block = partition.blocks()[index];
    const Belief next = stepper(block);
    if (next.empty()) return false;
    return solve_node(next, acc, path,
                      [&](std::unique_ptr<TreeNode> child, const MapCommitments& merged) {
                        auto child_holder = std::make_shared<std::unique_ptr<TreeNode>>(
                            std::move(child));
                        return solve_blocks(
                            partition, index + 1, merged, path, stepper,
                            [&, child_holder](
                                std::vector<std::pair<std::set<Event>, std::unique_ptr<TreeNode>>>
                                    siblings,
                                const MapCommitments& final_map) {
                              // This continuation can run once per sibling
                              // combination, and again after a rejected
                              // candidate, so the held subtree must survive
                              // each emission.
                              std::vector<std::pair<std::set<Event>, std::unique_ptr<TreeNode>>>
                                  children;
                              children.emplace_back(block, clone_tree(**child_holder));
                              for (auto& s : siblings) children.push_back(std::move(s));
                              return emit(std::move(children), final_map);
                            });
                      });
  }
};

// Converts the scratch tree into a plan graph over (node, world state)
// vertices.
struct PlanAssembler {
  const PGraph& world;
  Plan plan;

  void run(const TreeNode& root) {
    for (const auto& a : world.actions()) plan.graph.declare_action(a);
    for (const auto& o : world.observations()) plan.graph.declare_observation(o);
    emit(root, "n", true);
  }

  static std::string block_name(const std::set<Event>& block) {
    std::string name;
    for (const auto& e : block) {
      if (!name.empty()) name += "+";
      name += e;
    }
    return name;
  }

  void emit(const TreeNode& node, const std::string& prefix, bool initial) {
    for (const auto& w : node.belief) {
      plan.graph.add_vertex(prefix + "#" + w, node.tier, initial);
      if (node.terminal) plan.term.insert(prefix + "#" + w);
    }
    for (const auto& [block, child] : node.children) {
      const std::string child_prefix = prefix + "/" + block_name(block);
      emit(*child, child_prefix, false);
      for (const auto& w : node.belief) {
        // Events this member contributes to the block.
        std::set<Event> own;
        if (node.tier == Kind::Action) {
          auto it = node.actions.find(w);
          if (it == node.actions.end()) continue;
          for (const auto& a : it->second) {
            if (block.count(a)) own.insert(a);
          }
        } else {
          for (const auto& o : world.labels_from(w)) {
            if (block.count(o)) own.insert(o);
          }
        }
        for (const auto& e : own) {
          for (const auto& [to, labels] : world.edges_from(w)) {
            if (labels.count(e)) plan.graph.add_edge(prefix + "#" + w, child_prefix + "#" + to, {e});
          }
        }
      }
    }
  }
};

}  // namespace

SeekPlmResult seek_plan_and_map(const PlanningProblem& problem, const Formula& stipulation,
                                const SeekPlmConfig& config) {
  SeekPlmResult result;
  if (!is_state_determined(problem.world))
    throw InputError("the world graph must be state-determined; expand it first");
  {
    const auto unknown = unknown_symbols(stipulation, problem.world);
    if (!unknown.empty())
      throw InputError("stipulation symbol '" + unknown.front() +
                       "' does not name a world vertex");
  }

  SearchSpace space{problem.world, problem.goal, stipulation, config, &result.stats};
  const Belief root{*problem.world.initial().begin()};

  try {
    const bool accepted = space.solve_node(
        root, MapCommitments{}, {},
        [&](std::unique_ptr<TreeNode> tree, const MapCommitments& commitments) {
          LabelMap h = finalize(commitments.to_partial(), problem.world.actions(),
                                problem.world.observations());
          PlanAssembler assembler{problem.world, {}};
          assembler.run(*tree);
          const PGraph istate = image_graph(h, problem.world);
          const CheckVerdict verdict = check(problem, assembler.plan, assembler.plan.graph,
                                             istate, h, stipulation, &result.stats);
          if (!verdict.ok) return false;  // candidate refuted; keep searching
          result.plan = std::move(assembler.plan);
          result.map = std::move(h);
          return true;
        });
    if (accepted) {
      result.outcome = SeekOutcome::Found;
      result.message = "plan and label map found";
    } else {
      result.outcome = SeekOutcome::None;
      result.message = "no plan and label map satisfy the stipulation";
    }
  } catch (const BudgetExceeded& e) {
    result.outcome = SeekOutcome::Inconclusive;
    result.message = e.what();
  }
  return result;
}

}  // namespace pgplan
