#pragma once

#include <map>
#include <vector>

#include "pgplan/pgraph.hpp"

namespace pgplan::detail {

// Integer-indexed view of a PGraph for product constructions and searches.
struct IndexedGraph {
  std::vector<VertexId> ids;
  std::map<VertexId, int> index;
  std::vector<std::map<Event, std::vector<int>>> succ;  // per vertex: label -> targets
  std::vector<bool> is_action;
  std::vector<int> initials;

  explicit IndexedGraph(const PGraph& g) {
    ids.reserve(g.vertex_count());
    for (const auto& [v, kind] : g.vertices()) {
      index.emplace(v, static_cast<int>(ids.size()));
      ids.push_back(v);
      is_action.push_back(kind == Kind::Action);
    }
    succ.resize(ids.size());
    for (const auto& [from, targets] : g.adjacency()) {
      auto& slots = succ[index.at(from)];
      for (const auto& [to, labels] : targets) {
        const int t = index.at(to);
        for (const auto& label : labels) slots[label].push_back(t);
      }
    }
    for (const auto& v : g.initial()) initials.push_back(index.at(v));
  }
};

}  // namespace pgplan::detail
