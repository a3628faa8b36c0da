#include "pgplan/labelmap.hpp"

#include <algorithm>
#include <functional>

#include "pgplan/errors.hpp"

namespace pgplan {

LabelMap::LabelMap(std::set<Event> action_domain, std::set<Event> observation_domain,
                   const std::map<Event, Event>& mapping)
    : action_domain_(std::move(action_domain)), observation_domain_(std::move(observation_domain)) {
  for (const auto& a : action_domain_) {
    if (observation_domain_.count(a))
      throw InputError("event '" + a + "' appears in both domains");
  }
  for (const auto& [event, image] : mapping) {
    if (!action_domain_.count(event) && !observation_domain_.count(event))
      throw InputError("label map names event '" + event + "' outside its domain");
  }
  auto bind = [&](const Event& event) {
    auto it = mapping.find(event);
    const Event image = it == mapping.end() ? event : it->second;
    to_image_[event] = image;
    to_preimage_[image].insert(event);
  };
  for (const auto& a : action_domain_) bind(a);
  for (const auto& o : observation_domain_) bind(o);

  for (const auto& [image, preimage] : to_preimage_) {
    bool has_action = false, has_observation = false;
    for (const auto& e : preimage) {
      (action_domain_.count(e) ? has_action : has_observation) = true;
    }
    if (has_action && has_observation)
      throw InputError("image symbol '" + image +
                       "' conflates an action with an observation");
  }
}

LabelMap LabelMap::identity(const std::set<Event>& actions, const std::set<Event>& observations) {
  return LabelMap(actions, observations, {});
}

LabelMap LabelMap::identity_for(const PGraph& g) {
  return identity(g.actions(), g.observations());
}

const Event& LabelMap::image_of(const Event& event) const {
  auto it = to_image_.find(event);
  if (it == to_image_.end())
    throw InputError("event '" + event + "' is outside the label map's domain");
  return it->second;
}

const std::set<Event>& LabelMap::preimage_of(const Event& image) const {
  auto it = to_preimage_.find(image);
  if (it == to_preimage_.end())
    throw InputError("'" + image + "' is not an image symbol of the label map");
  return it->second;
}

std::set<Event> LabelMap::image_actions() const {
  std::set<Event> out;
  for (const auto& a : action_domain_) out.insert(to_image_.at(a));
  return out;
}

std::set<Event> LabelMap::image_observations() const {
  std::set<Event> out;
  for (const auto& o : observation_domain_) out.insert(to_image_.at(o));
  return out;
}

Execution LabelMap::apply(const Execution& s) const {
  Execution out;
  out.reserve(s.size());
  for (const auto& e : s) out.push_back(image_of(e));
  return out;
}

std::set<Event> LabelMap::apply_set(const std::set<Event>& events) const {
  std::set<Event> out;
  for (const auto& e : events) out.insert(image_of(e));
  return out;
}

std::set<Event> LabelMap::preimage_set(const std::set<Event>& images) const {
  std::set<Event> out;
  for (const auto& x : images) {
    const auto& pre = preimage_of(x);
    out.insert(pre.begin(), pre.end());
  }
  return out;
}

PGraph image_graph(const LabelMap& h, const PGraph& g) {
  for (const auto& a : g.actions())
    if (!h.in_domain(a)) throw InputError("label map does not cover action '" + a + "'");
  for (const auto& o : g.observations())
    if (!h.in_domain(o)) throw InputError("label map does not cover observation '" + o + "'");

  PGraph out;
  for (const auto& a : g.actions()) out.declare_action(h.image_of(a));
  for (const auto& o : g.observations()) out.declare_observation(h.image_of(o));
  for (const auto& [v, kind] : g.vertices()) out.add_vertex(v, kind, g.initial().count(v) != 0);
  for (const auto& [from, targets] : g.adjacency()) {
    for (const auto& [to, labels] : targets) out.add_edge(from, to, h.apply_set(labels));
  }
  return out;
}

PGraph preimage_graph(const LabelMap& h, const PGraph& igraph) {
  PGraph out;
  for (const auto& x : igraph.actions()) {
    for (const auto& e : h.preimage_of(x)) out.declare_action(e);
  }
  for (const auto& x : igraph.observations()) {
    for (const auto& e : h.preimage_of(x)) out.declare_observation(e);
  }
  for (const auto& [v, kind] : igraph.vertices())
    out.add_vertex(v, kind, igraph.initial().count(v) != 0);
  for (const auto& [from, targets] : igraph.adjacency()) {
    for (const auto& [to, labels] : targets) out.add_edge(from, to, h.preimage_set(labels));
  }
  return out;
}

void PartialLabelMap::add_block(const std::set<Event>& block) {
  if (block.empty()) throw InputError("partial label map blocks must be nonempty");
  const std::set<Event> current = support();
  for (const auto& e : block) {
    if (current.count(e))
      throw InputError("event '" + e + "' already constrained by this partial map");
  }
  blocks_.push_back(block);
  canonicalize();
}

void PartialLabelMap::canonicalize() {
  std::sort(blocks_.begin(), blocks_.end(),
            [](const std::set<Event>& a, const std::set<Event>& b) { return *a.begin() < *b.begin(); });
}

std::set<Event> PartialLabelMap::support() const {
  std::set<Event> out;
  for (const auto& b : blocks_) out.insert(b.begin(), b.end());
  return out;
}

std::optional<std::size_t> PartialLabelMap::block_of(const Event& e) const {
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (blocks_[i].count(e)) return i;
  }
  return std::nullopt;
}

bool PartialLabelMap::co_blocked(const Event& a, const Event& b) const {
  auto ia = block_of(a), ib = block_of(b);
  return ia && ib && *ia == *ib;
}

bool PartialLabelMap::separated(const Event& a, const Event& b) const {
  auto ia = block_of(a), ib = block_of(b);
  return ia && ib && *ia != *ib;
}

bool PartialLabelMap::operator==(const PartialLabelMap& other) const {
  return blocks_ == other.blocks_;
}

Consolidation consolidate(const PartialLabelMap& p1, const PartialLabelMap& p2) {
  // Union-find over the combined support; co-blocked events are merged.
  std::set<Event> universe = p1.support();
  {
    auto s2 = p2.support();
    universe.insert(s2.begin(), s2.end());
  }
  std::map<Event, Event> parent;
  for (const auto& e : universe) parent[e] = e;
  std::function<Event(const Event&)> find = [&](const Event& e) -> Event {
    Event root = e;
    while (parent[root] != root) root = parent[root];
    Event walk = e;
    while (parent[walk] != root) {
      Event next = parent[walk];
      parent[walk] = root;
      walk = next;
    }
    return root;
  };
  auto unite = [&](const Event& a, const Event& b) {
    Event ra = find(a), rb = find(b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  };
  for (const auto* p : {&p1, &p2}) {
    for (const auto& block : p->blocks()) {
      const Event& first = *block.begin();
      for (const auto& e : block) unite(first, e);
    }
  }

  Consolidation result;
  // Two events separated by either input must not have been merged.
  for (const auto* p : {&p1, &p2}) {
    const auto& blocks = p->blocks();
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      for (std::size_t j = i + 1; j < blocks.size(); ++j) {
        for (const auto& a : blocks[i]) {
          for (const auto& b : blocks[j]) {
            if (find(a) == find(b)) {
              result.ok = false;
              result.conflict = {std::min(a, b), std::max(a, b)};
              return result;
            }
          }
        }
      }
    }
  }

  std::map<Event, std::set<Event>> classes;
  for (const auto& e : universe) classes[find(e)].insert(e);
  result.ok = true;
  for (const auto& [root, members] : classes) result.merged.add_block(members);
  return result;
}

Event MapCommitments::find(const Event& e) const {
  Event root = e;
  auto it = parent_.find(root);
  while (it != parent_.end() && it->second != root) {
    root = it->second;
    it = parent_.find(root);
  }
  return root;
}

bool MapCommitments::co_blocked(const Event& a, const Event& b) const {
  return find(a) == find(b);
}

bool MapCommitments::separated(const Event& a, const Event& b) const {
  return separated_.count({std::min(a, b), std::max(a, b)}) != 0;
}

bool MapCommitments::commit(const PartialLabelMap& p, std::pair<Event, Event>* conflict) {
  // Stage the changes, then verify every committed separation before
  // adopting them.
  std::map<Event, Event> parent = parent_;
  auto staged_find = [&](const Event& e) {
    Event root = e;
    auto it = parent.find(root);
    while (it != parent.end() && it->second != root) {
      root = it->second;
      it = parent.find(root);
    }
    return root;
  };
  auto unite = [&](const Event& a, const Event& b) {
    parent.emplace(a, a);
    parent.emplace(b, b);
    const Event ra = staged_find(a), rb = staged_find(b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  };
  for (const auto& block : p.blocks()) {
    const Event& first = *block.begin();
    for (const auto& e : block) unite(first, e);
  }

  std::set<std::pair<Event, Event>> separated = separated_;
  const auto& blocks = p.blocks();
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    for (std::size_t j = i + 1; j < blocks.size(); ++j) {
      for (const auto& a : blocks[i]) {
        for (const auto& b : blocks[j]) separated.insert({std::min(a, b), std::max(a, b)});
      }
    }
  }
  for (const auto& [a, b] : separated) {
    if (staged_find(a) == staged_find(b)) {
      if (conflict != nullptr) *conflict = {a, b};
      return false;
    }
  }
  parent_ = std::move(parent);
  separated_ = std::move(separated);
  return true;
}

PartialLabelMap MapCommitments::to_partial() const {
  std::map<Event, std::set<Event>> classes;
  for (const auto& [e, parent] : parent_) classes[find(e)].insert(e);
  PartialLabelMap out;
  for (const auto& [root, members] : classes) out.add_block(members);
  return out;
}

PartitionEnumerator::PartitionEnumerator(const std::set<Event>& events)
    : events_(events.begin(), events.end()) {
  if (events_.empty()) throw InputError("cannot enumerate partitions of an empty set");
  reset();
}

void PartitionEnumerator::reset() {
  rgs_.assign(events_.size(), 0);
  done_ = false;
  started_ = false;
}

PartialLabelMap PartitionEnumerator::materialize() const {
  std::map<std::size_t, std::set<Event>> groups;
  for (std::size_t i = 0; i < events_.size(); ++i) groups[rgs_[i]].insert(events_[i]);
  PartialLabelMap p;
  for (const auto& [idx, block] : groups) p.add_block(block);
  return p;
}

std::optional<PartialLabelMap> PartitionEnumerator::next() {
  if (done_) return std::nullopt;
  if (!started_) {
    started_ = true;
    return materialize();
  }
  // Advance the restricted growth string: rgs_[i] may rise to
  // 1 + max(rgs_[0..i-1]).
  const std::size_t n = events_.size();
  std::size_t i = n;
  while (i-- > 0) {
    std::size_t cap = 0;
    for (std::size_t j = 0; j < i; ++j) cap = std::max(cap, rgs_[j] + 1);
    if (i == 0) cap = 0;
    if (rgs_[i] < cap) {
      ++rgs_[i];
      for (std::size_t j = i + 1; j < n; ++j) rgs_[j] = 0;
      return materialize();
    }
  }
  done_ = true;
  return std::nullopt;
}

std::vector<PartialLabelMap> enumerate_partitions(const std::set<Event>& events,
                                                  const std::set<Event>& action_universe,
                                                  const std::set<Event>& observation_universe) {
  if (events.empty()) throw InputError("cannot enumerate partitions of an empty set");
  bool any_action = false, any_observation = false;
  for (const auto& e : events) {
    if (action_universe.count(e)) any_action = true;
    else if (observation_universe.count(e)) any_observation = true;
    else throw InputError("event '" + e + "' is not in either alphabet");
  }
  if (any_action && any_observation)
    throw InputError("cannot partition a mixed set of actions and observations");

  std::vector<PartialLabelMap> out;
  PartitionEnumerator it(events);
  while (auto p = it.next()) out.push_back(std::move(*p));
  return out;
}

LabelMap finalize(const PartialLabelMap& p, const std::set<Event>& action_domain,
                  const std::set<Event>& observation_domain) {
  auto block_name = [](const std::set<Event>& block) {
    std::string name;
    for (const auto& e : block) {
      if (!name.empty()) name += "+";
      name += e;
    }
    return name;
  };
  std::map<Event, Event> mapping;
  std::set<Event> images;
  auto place = [&](const std::set<Event>& block) {
    const Event image = block_name(block);
    if (!images.insert(image).second)
      throw InputError("image symbol collision on '" + image + "'");
    for (const auto& e : block) {
      if (!action_domain.count(e) && !observation_domain.count(e))
        throw InputError("partial map constrains '" + e + "' outside the domain");
      mapping[e] = image;
    }
  };
  for (const auto& block : p.blocks()) place(block);
  const std::set<Event> constrained = p.support();
  for (const auto& domain : {action_domain, observation_domain}) {
    for (const auto& e : domain) {
      if (!constrained.count(e)) place({e});
    }
  }
  return LabelMap(action_domain, observation_domain, mapping);
}

}  // namespace pgplan
