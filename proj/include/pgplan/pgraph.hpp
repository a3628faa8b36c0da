#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace pgplan {

using VertexId = std::string;
using Event = std::string;

// A finite alternating sequence of action/observation events.
using Execution = std::vector<Event>;

enum class Kind { Action, Observation };

const char* kind_name(Kind k);

std::string join_execution(const Execution& s);

// Deterministic id for a generated subset vertex: "{a,b,c}" over sorted members.
VertexId subset_vertex_id(const std::set<VertexId>& members);

// Deterministic id for a generated product vertex.
VertexId pair_vertex_id(const VertexId& a, const VertexId& b);

struct ValidationReport {
  std::vector<std::string> violations;
  std::vector<std::string> warnings;  // e.g. unreachable vertices
  bool ok() const { return violations.empty(); }
};

// An edge-labelled bipartite transition structure alternating action and
// observation vertices. Edges between the same endpoints are merged by
// unioning their label sets; all containers are ordered so that iteration,
// generated ids and serialization are deterministic.
class PGraph {
 public:
  void declare_action(const Event& name);
  void declare_observation(const Event& name);

  void add_vertex(const VertexId& id, Kind kind, bool initial = false);
  void mark_initial(const VertexId& id);
  void add_edge(const VertexId& from, const VertexId& to, const std::set<Event>& labels);

  bool has_vertex(const VertexId& id) const;
  Kind kind(const VertexId& id) const;  // throws InputError on unknown id
  std::optional<Kind> label_kind(const Event& name) const;

  const std::map<VertexId, Kind>& vertices() const { return vertices_; }
  const std::set<VertexId>& initial() const { return initial_; }
  const std::set<Event>& actions() const { return actions_; }
  const std::set<Event>& observations() const { return observations_; }

  // Outgoing adjacency of one vertex: target -> labels.
  const std::map<VertexId, std::set<Event>>& edges_from(const VertexId& id) const;
  const std::map<VertexId, std::map<VertexId, std::set<Event>>>& adjacency() const {
    return adj_;
  }

  // Union of the label sets on all edges leaving `id`.
  std::set<Event> labels_from(const VertexId& id) const;

  std::size_t vertex_count() const { return vertices_.size(); }

 private:
  std::map<VertexId, Kind> vertices_;
  std::set<VertexId> initial_;
  std::set<Event> actions_;
  std::set<Event> observations_;
  std::map<VertexId, std::map<VertexId, std::set<Event>>> adj_;
};

// Reports every invariant violation (empty list means the graph is well
// formed). Unreachable vertices are reported as warnings, not violations.
ValidationReport validate(const PGraph& g);

// One synchronous step: all vertices reachable from `from` by an edge whose
// label set contains `event`. The event must belong to a declared alphabet.
std::set<VertexId> step(const PGraph& g, const std::set<VertexId>& from, const Event& event);

// True iff s can be traced from v to w. Both ids must exist.
bool transitions_to(const PGraph& g, const VertexId& v, const Execution& s, const VertexId& w);

// All vertices reached by s from the initial set; empty iff s is not an
// execution of g.
std::set<VertexId> reached_vertices(const PGraph& g, const Execution& s);

// Every execution of g of length <= k.
std::set<Execution> language_upto(const PGraph& g, std::size_t k);

// Executions of length <= k that reach exactly B (and nothing outside B),
// decided on the state-determined expansion. B must be a nonempty subset of
// the vertex set; an unreachable B yields the empty set.
std::set<Execution> exact_reaching_executions(const PGraph& g, const std::set<VertexId>& B,
                                              std::size_t k);

// Product over reachable vertex pairs; the language of the result is the
// intersection of the input languages. Initial sets must have the same kind.
PGraph tensor_product(const PGraph& g1, const PGraph& g2);

// State-determined expansion: `graph` reaches exactly one vertex per
// execution and `subset` records which input vertices each expanded vertex
// stands for.
struct SdeGraph {
  PGraph graph;
  std::map<VertexId, std::set<VertexId>> subset;
};

SdeGraph sde(const PGraph& g);

// True iff every execution reaches exactly one vertex: a single initial
// vertex and deterministic stepping from every reachable vertex.
bool is_state_determined(const PGraph& g);

}  // namespace pgplan
