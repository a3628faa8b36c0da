#include "pgplan/pgraph.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "pgplan/errors.hpp"

namespace pgplan {

const char* kind_name(Kind k) { return k == Kind::Action ? "action" : "observation"; }

std::string join_execution(const Execution& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i > 0) out += ".";
    out += s[i];
  }
  return out.empty() ? "<empty>" : out;
}

VertexId subset_vertex_id(const std::set<VertexId>& members) {
  std::string id = "{";
  bool first = true;
  for (const auto& m : members) {
    if (!first) id += ",";
    id += m;
    first = false;
  }
  id += "}";
  return id;
}

VertexId pair_vertex_id(const VertexId& a, const VertexId& b) {
  return "(" + a + "|" + b + ")";
}

void PGraph::declare_action(const Event& name) {
  if (observations_.count(name))
    throw InputError("event '" + name + "' already declared as an observation");
  actions_.insert(name);
}

void PGraph::declare_observation(const Event& name) {
  if (actions_.count(name))
    throw InputError("event '" + name + "' already declared as an action");
  observations_.insert(name);
}

void PGraph::add_vertex(const VertexId& id, Kind kind, bool initial) {
  auto [it, inserted] = vertices_.emplace(id, kind);
  if (!inserted && it->second != kind)
    throw InputError("vertex '" + id + "' re-added with a different kind");
  if (initial) initial_.insert(id);
}

void PGraph::mark_initial(const VertexId& id) {
  if (!has_vertex(id)) throw InputError("unknown vertex '" + id + "'");
  initial_.insert(id);
}

void PGraph::add_edge(const VertexId& from, const VertexId& to, const std::set<Event>& labels) {
  if (!has_vertex(from)) throw InputError("unknown edge source '" + from + "'");
  if (!has_vertex(to)) throw InputError("unknown edge target '" + to + "'");
  if (labels.empty()) throw InputError("edge " + from + " -> " + to + " has no labels");
  auto& slot = adj_[from][to];
  slot.insert(labels.begin(), labels.end());
}

bool PGraph::has_vertex(const VertexId& id) const { return vertices_.count(id) != 0; }

Kind PGraph::kind(const VertexId& id) const {
  auto it = vertices_.find(id);
  if (it == vertices_.end()) throw InputError("unknown vertex '" + id + "'");
  return it->second;
}

std::optional<Kind> PGraph::label_kind(const Event& name) const {
  if (actions_.count(name)) return Kind::Action;
  if (observations_.count(name)) return Kind::Observation;
  return std::nullopt;
}

const std::map<VertexId, std::set<Event>>& PGraph::edges_from(const VertexId& id) const {
  static const std::map<VertexId, std::set<Event>> kEmpty;
  auto it = adj_.find(id);
  return it == adj_.end() ? kEmpty : it->second;
}

std::set<Event> PGraph::labels_from(const VertexId& id) const {
  std::set<Event> out;
  for (const auto& [to, labels] : edges_from(id)) out.insert(labels.begin(), labels.end());
  return out;
}

ValidationReport validate(const PGraph& g) {
  ValidationReport report;
  auto violation = [&](const std::string& msg) { report.violations.push_back(msg); };

  if (g.initial().empty()) violation("initial set is empty");

  bool has_action_initial = false, has_observation_initial = false;
  for (const auto& v : g.initial()) {
    if (!g.has_vertex(v)) {
      violation("initial vertex '" + v + "' is not in the vertex set");
      continue;
    }
    (g.kind(v) == Kind::Action ? has_action_initial : has_observation_initial) = true;
  }
  if (has_action_initial && has_observation_initial)
    violation("mixed initial kinds: initial set contains both action and observation vertices");

  for (const auto& [from, targets] : g.adjacency()) {
    const Kind from_kind = g.kind(from);
    const Kind expected_label_kind = from_kind;
    const Kind expected_target_kind =
        from_kind == Kind::Action ? Kind::Observation : Kind::Action;
    for (const auto& [to, labels] : targets) {
      if (g.kind(to) != expected_target_kind)
        violation("alternation violation: edge " + from + " -> " + to + " leaves a " +
                  kind_name(from_kind) + " vertex but targets a " + kind_name(g.kind(to)) +
                  " vertex");
      if (labels.empty()) violation("edge " + from + " -> " + to + " has no labels");
      for (const auto& label : labels) {
        auto lk = g.label_kind(label);
        if (!lk) {
          violation("unknown label '" + label + "' on edge " + from + " -> " + to);
        } else if (*lk != expected_label_kind) {
          violation("label-kind mismatch: " + std::string(kind_name(*lk)) + " label '" + label +
                    "' on edge " + from + " -> " + to + " leaving a " + kind_name(from_kind) +
                    " vertex");
        }
      }
    }
  }

  // Reachability is not an invariant of the structure; report as warnings.
  std::set<VertexId> seen = g.initial();
  std::deque<VertexId> frontier(seen.begin(), seen.end());
  while (!frontier.empty()) {
    VertexId v = frontier.front();
    frontier.pop_front();
    if (!g.has_vertex(v)) continue;
    for (const auto& [to, labels] : g.edges_from(v)) {
      if (seen.insert(to).second) frontier.push_back(to);
    }
  }
  for (const auto& [v, kind] : g.vertices()) {
    if (!seen.count(v))
      report.warnings.push_back("vertex '" + v + "' is unreachable from the initial set");
  }
  return report;
}

std::set<VertexId> step(const PGraph& g, const std::set<VertexId>& from, const Event& event) {
  if (!g.label_kind(event)) throw InputError("event '" + event + "' is not in the alphabet");
  std::set<VertexId> out;
  for (const auto& v : from) {
    for (const auto& [to, labels] : g.edges_from(v)) {
      if (labels.count(event)) out.insert(to);
    }
  }
  return out;
}

bool transitions_to(const PGraph& g, const VertexId& v, const Execution& s, const VertexId& w) {
  if (!g.has_vertex(v)) throw InputError("unknown vertex '" + v + "'");
  if (!g.has_vertex(w)) throw InputError("unknown vertex '" + w + "'");
  std::set<VertexId> current{v};
  for (const auto& event : s) {
    current = step(g, current, event);
    if (current.empty()) return false;
  }
  return current.count(w) != 0;
}

std::set<VertexId> reached_vertices(const PGraph& g, const Execution& s) {
  std::set<VertexId> current = g.initial();
  for (const auto& event : s) {
    current = step(g, current, event);
    if (current.empty()) return {};
  }
  return current;
}

std::set<Execution> language_upto(const PGraph& g, std::size_t k) {
  std::set<Execution> out;
  if (g.initial().empty()) return out;
  // Frontier maps each execution to the set of vertices it reaches.
  std::map<Execution, std::set<VertexId>> frontier;
  frontier[{}] = g.initial();
  out.insert(Execution{});
  for (std::size_t len = 0; len < k && !frontier.empty(); ++len) {
    std::map<Execution, std::set<VertexId>> next;
    for (const auto& [prefix, active] : frontier) {
      std::set<Event> available;
      for (const auto& v : active) {
        auto labels = g.labels_from(v);
        available.insert(labels.begin(), labels.end());
      }
      for (const auto& event : available) {
        Execution extended = prefix;
        extended.push_back(event);
        next[extended] = step(g, active, event);
        out.insert(extended);
      }
    }
    frontier = std::move(next);
  }
  return out;
}

std::set<Execution> exact_reaching_executions(const PGraph& g, const std::set<VertexId>& B,
                                              std::size_t k) {
  if (B.empty()) throw InputError("exact-reach query with empty vertex set");
  for (const auto& v : B) {
    if (!g.has_vertex(v)) throw InputError("exact-reach query names unknown vertex '" + v + "'");
  }
  const SdeGraph expanded = sde(g);
  // Locate the subset vertex standing for exactly B, if reachable at all.
  VertexId target;
  bool found = false;
  for (const auto& [id, members] : expanded.subset) {
    if (members == B) {
      target = id;
      found = true;
      break;
    }
  }
  std::set<Execution> out;
  if (!found) return out;  // no execution reaches exactly B

  std::map<Execution, VertexId> frontier;
  const VertexId start = *expanded.graph.initial().begin();
  frontier[{}] = start;
  if (start == target) out.insert(Execution{});
  for (std::size_t len = 0; len < k && !frontier.empty(); ++len) {
    std::map<Execution, VertexId> next;
    for (const auto& [prefix, at] : frontier) {
      for (const auto& [to, labels] : expanded.graph.edges_from(at)) {
        for (const auto& event : labels) {
          Execution extended = prefix;
          extended.push_back(event);
          next[extended] = to;
          if (to == target) out.insert(extended);
        }
      }
    }
    frontier = std::move(next);
  }
  return out;
}

namespace {

void merge_alphabets_checked(const PGraph& g1, const PGraph& g2, PGraph& out) {
  for (const auto& a : g1.actions()) {
    if (g2.label_kind(a) == Kind::Observation)
      throw InputError("alphabets incompatible: '" + a + "' is an action in one graph and an observation in the other");
  }
  for (const auto& o : g1.observations()) {
    if (g2.label_kind(o) == Kind::Action)
      throw InputError("alphabets incompatible: '" + o + "' is an observation in one graph and an action in the other");
  }
  // The product can only carry labels present in both graphs.
  for (const auto& a : g1.actions())
    if (g2.actions().count(a)) out.declare_action(a);
  for (const auto& o : g1.observations())
    if (g2.observations().count(o)) out.declare_observation(o);
}

}  // namespace

PGraph tensor_product(const PGraph& g1, const PGraph& g2) {
  PGraph out;
  merge_alphabets_checked(g1, g2, out);

  if (g1.initial().empty() || g2.initial().empty())
    throw InputError("tensor product requires nonempty initial sets");
  auto initial_kind = [](const PGraph& g) {
    std::optional<Kind> k;
    for (const auto& v : g.initial()) {
      Kind kv = g.kind(v);
      if (k && *k != kv) throw InputError("initial set mixes vertex kinds");
      k = kv;
    }
    return *k;
  };
  if (initial_kind(g1) != initial_kind(g2))
    throw InputError("tensor product requires initial sets of the same kind");

  std::deque<std::pair<VertexId, VertexId>> frontier;
  std::set<std::pair<VertexId, VertexId>> seen;
  for (const auto& v1 : g1.initial()) {
    for (const auto& v2 : g2.initial()) {
      out.add_vertex(pair_vertex_id(v1, v2), g1.kind(v1), /*initial=*/true);
      seen.insert({v1, v2});
      frontier.push_back({v1, v2});
    }
  }
  while (!frontier.empty()) {
    auto [v1, v2] = frontier.front();
    frontier.pop_front();
    const VertexId from_id = pair_vertex_id(v1, v2);
    for (const auto& [to1, labels1] : g1.edges_from(v1)) {
      for (const auto& [to2, labels2] : g2.edges_from(v2)) {
        std::set<Event> shared;
        std::set_intersection(labels1.begin(), labels1.end(), labels2.begin(), labels2.end(),
                              std::inserter(shared, shared.begin()));
        if (shared.empty()) continue;
        if (!seen.count({to1, to2})) {
          out.add_vertex(pair_vertex_id(to1, to2), g1.kind(to1));
          seen.insert({to1, to2});
          frontier.push_back({to1, to2});
        }
        out.add_edge(from_id, pair_vertex_id(to1, to2), shared);
      }
    }
  }
  return out;
}

SdeGraph sde(const PGraph& g) {
  SdeGraph out;
  for (const auto& a : g.actions()) out.graph.declare_action(a);
  for (const auto& o : g.observations()) out.graph.declare_observation(o);
  if (g.initial().empty()) throw InputError("state-determined expansion requires an initial set");

  auto subset_kind = [&](const std::set<VertexId>& members) {
    std::optional<Kind> k;
    for (const auto& v : members) {
      Kind kv = g.kind(v);
      if (k && *k != kv)
        throw InputError("state-determined expansion reached a mixed-kind vertex set");
      k = kv;
    }
    return *k;
  };

  const std::set<VertexId> start = g.initial();
  const VertexId start_id = subset_vertex_id(start);
  out.graph.add_vertex(start_id, subset_kind(start), /*initial=*/true);
  out.subset[start_id] = start;

  std::deque<std::set<VertexId>> frontier{start};
  std::set<std::set<VertexId>> seen{start};
  while (!frontier.empty()) {
    std::set<VertexId> current = frontier.front();
    frontier.pop_front();
    const VertexId current_id = subset_vertex_id(current);
    std::set<Event> available;
    for (const auto& v : current) {
      auto labels = g.labels_from(v);
      available.insert(labels.begin(), labels.end());
    }
    // Group target subsets by event, then merge events sharing a target into
    // one edge.
    std::map<VertexId, std::set<Event>> edges;  // target id -> labels
    for (const auto& event : available) {
      std::set<VertexId> target = step(g, current, event);
      if (target.empty()) continue;
      const VertexId target_id = subset_vertex_id(target);
      if (!seen.count(target)) {
        out.graph.add_vertex(target_id, subset_kind(target));
        out.subset[target_id] = target;
        seen.insert(target);
        frontier.push_back(target);
      }
      edges[target_id].insert(event);
    }
    for (const auto& [target_id, labels] : edges) out.graph.add_edge(current_id, target_id, labels);
  }
  return out;
}


bool is_state_determined(const PGraph& g) {
  if (g.initial().size() != 1) return false;
  std::set<VertexId> seen = g.initial();
  std::deque<VertexId> queue(seen.begin(), seen.end());
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    std::map<Event, int> fanout;
    for (const auto& [to, labels] : g.edges_from(v)) {
      for (const auto& label : labels) {
        if (++fanout[label] > 1) return false;
      }
      if (seen.insert(to).second) queue.push_back(to);
    }
  }
  return true;
}

}  // namespace pgplan
