#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pgplan/pgraph.hpp"

namespace pgplan {

// A total, kind-preserving event map: the disclosure policy. Every domain
// event has exactly one image symbol; every image symbol has a nonempty
// preimage; actions and observations never share an image.
class LabelMap {
 public:
  LabelMap() = default;
  LabelMap(std::set<Event> action_domain, std::set<Event> observation_domain,
           const std::map<Event, Event>& mapping);

  static LabelMap identity(const std::set<Event>& actions, const std::set<Event>& observations);
  static LabelMap identity_for(const PGraph& g);

  const Event& image_of(const Event& event) const;           // throws on out-of-domain
  const std::set<Event>& preimage_of(const Event& image) const;  // throws on unknown image

  bool in_domain(const Event& event) const { return to_image_.count(event) != 0; }
  bool has_image(const Event& image) const { return to_preimage_.count(image) != 0; }

  const std::set<Event>& action_domain() const { return action_domain_; }
  const std::set<Event>& observation_domain() const { return observation_domain_; }
  std::set<Event> image_actions() const;       // X_u
  std::set<Event> image_observations() const;  // X_y

  const std::map<Event, Event>& mapping() const { return to_image_; }

  Execution apply(const Execution& s) const;
  std::set<Event> apply_set(const std::set<Event>& events) const;
  std::set<Event> preimage_set(const std::set<Event>& images) const;

 private:
  std::map<Event, Event> to_image_;
  std::map<Event, std::set<Event>> to_preimage_;
  std::set<Event> action_domain_;
  std::set<Event> observation_domain_;
};

// Applies h to every edge label set and to the alphabets; vertices unchanged.
PGraph image_graph(const LabelMap& h, const PGraph& g);

// Replaces every edge label set X' by the union of preimages of its symbols.
PGraph preimage_graph(const LabelMap& h, const PGraph& igraph);

// A partition of a subset of the event universe: events in one block are
// committed to share an image, events in different blocks to differ.
class PartialLabelMap {
 public:
  PartialLabelMap() = default;

  void add_block(const std::set<Event>& block);  // throws if it overlaps the support

  const std::vector<std::set<Event>>& blocks() const { return blocks_; }
  std::set<Event> support() const;
  bool empty() const { return blocks_.empty(); }

  bool co_blocked(const Event& a, const Event& b) const;
  bool separated(const Event& a, const Event& b) const;
  std::optional<std::size_t> block_of(const Event& e) const;

  bool operator==(const PartialLabelMap& other) const;

 private:
  void canonicalize();
  std::vector<std::set<Event>> blocks_;  // sorted by smallest member
};

struct Consolidation {
  bool ok = false;
  PartialLabelMap merged;              // valid when ok
  std::pair<Event, Event> conflict;    // valid when !ok: a pair separated in one
                                       // input and co-blocked in the result
};

// Finest partition coarser than both inputs on the union of their supports,
// or a conflict naming an offending event pair. Conflicts are values, not
// errors: they drive backtracking.
Consolidation consolidate(const PartialLabelMap& p1, const PartialLabelMap& p2);

// Accumulated label-map commitments across many partial maps. A bare
// partition cannot distinguish a committed separation (two events placed in
// different blocks of one partial map) from two events that merely arrived
// through unrelated partial maps, so chaining `consolidate` over-constrains;
// this keeps co-block classes and committed separation pairs apart.
class MapCommitments {
 public:
  // Folds one partial map in. On contradiction, reports an offending pair
  // and leaves the commitments unchanged.
  bool commit(const PartialLabelMap& p, std::pair<Event, Event>* conflict = nullptr);

  bool co_blocked(const Event& a, const Event& b) const;
  bool separated(const Event& a, const Event& b) const;

  // The co-block classes as a partial map (separations need no
  // materialization: distinct classes finalize to distinct images).
  PartialLabelMap to_partial() const;

 private:
  Event find(const Event& e) const;
  std::map<Event, Event> parent_;                 // union-find over co-blocks
  std::set<std::pair<Event, Event>> separated_;   // committed separations
};

// Streams every set partition of `events` exactly once, in restricted-growth
// order. Restartable; no shared state.
class PartitionEnumerator {
 public:
  explicit PartitionEnumerator(const std::set<Event>& events);
  std::optional<PartialLabelMap> next();
  void reset();

 private:
  std::vector<Event> events_;
  std::vector<std::size_t> rgs_;
  bool done_ = false;
  bool started_ = false;
  PartialLabelMap materialize() const;
};

// All partitions of `events`, validated against the alphabets: the events
// must be nonempty and all of one kind.
std::vector<PartialLabelMap> enumerate_partitions(const std::set<Event>& events,
                                                  const std::set<Event>& action_universe,
                                                  const std::set<Event>& observation_universe);

// Extends p to a total map over the given domains: constrained blocks keep
// their commitments, every unconstrained event becomes a singleton block.
// Image symbols are named by joining the sorted block members with '+'.
LabelMap finalize(const PartialLabelMap& p, const std::set<Event>& action_domain,
                  const std::set<Event>& observation_domain);

}  // namespace pgplan
