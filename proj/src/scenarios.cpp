#include "pgplan/scenarios.hpp"

#include <array>

#include "pgplan/errors.hpp"

namespace pgplan {

namespace {

struct Cell {
  int row, col;
  bool operator==(const Cell& o) const { return row == o.row && col == o.col; }
};

constexpr int kRows = 3;
constexpr int kCols = 4;

// Canonical layout. The robot starts on the blue-star cell and must step off
// and back to take the blue-light reading; the '?' cells mirror each other
// across the middle row so the two facility types admit image-identical
// inspection routes under the canonical map; the exit is absorbing.
constexpr Cell kStart{1, 1};
constexpr Cell kBlue{1, 1};
constexpr Cell kQueryPebble{0, 1};
constexpr Cell kQueryBreeder{2, 1};
constexpr Cell kExit{1, 2};
constexpr bool kAbsorbingExit = true;

const std::array<const char*, 4> kVariants{"pbhi", "pblo", "brhi", "brlo"};

bool is_pebble(const std::string& variant) { return variant[0] == 'p'; }
bool is_high(const std::string& variant) { return variant.substr(2) == "hi"; }

std::string cell_name(const Cell& c) {
  return "r" + std::to_string(c.row) + "c" + std::to_string(c.col);
}

std::string action_vertex(const Cell& c, const std::string& variant) {
  return cell_name(c) + "_" + variant;
}

std::string obs_vertex(const Cell& c, const std::string& variant) {
  return cell_name(c) + "_" + variant + "_in";
}

// The observation received on arrival. Exactly five symbols: the blue light
// at the blue-star cell in pebble-bed worlds, the radioactivity reading at
// the type-matching '?' cell, the exit marker, and "none" everywhere else.
std::string observation_at(const Cell& c, const std::string& variant) {
  if (c == kExit) return "exit";
  if (c == kBlue) return is_pebble(variant) ? "blue" : "none";
  if (c == kQueryPebble && is_pebble(variant)) return is_high(variant) ? "hi" : "lo";
  if (c == kQueryBreeder && !is_pebble(variant)) return is_high(variant) ? "hi" : "lo";
  return "none";
}

PGraph build_nuclear_raw() {
  PGraph w;
  for (const auto& a : {"left", "right", "up", "down"}) w.declare_action(a);
  for (const auto& o : {"blue", "hi", "lo", "exit", "none"}) w.declare_observation(o);

  for (int row = 0; row < kRows; ++row) {
    for (int col = 0; col < kCols; ++col) {
      const Cell c{row, col};
      for (const auto& v : kVariants) {
        w.add_vertex(action_vertex(c, v), Kind::Action, c == kStart);
        w.add_vertex(obs_vertex(c, v), Kind::Observation);
      }
    }
  }
  const std::array<std::pair<const char*, Cell>, 4> moves{{
      {"left", {0, -1}}, {"right", {0, 1}}, {"up", {-1, 0}}, {"down", {1, 0}}}};
  for (int row = 0; row < kRows; ++row) {
    for (int col = 0; col < kCols; ++col) {
      const Cell c{row, col};
      if (kAbsorbingExit && c == kExit) continue;  // inspection ends at the exit
      for (const auto& [name, delta] : moves) {
        const Cell to{row + delta.row, col + delta.col};
        if (to.row < 0 || to.row >= kRows || to.col < 0 || to.col >= kCols) continue;
        for (const auto& v : kVariants) {
          w.add_edge(action_vertex(c, v), obs_vertex(to, v), {name});
        }
      }
      for (const auto& v : kVariants) {
        w.add_edge(obs_vertex(c, v), action_vertex(c, v), {observation_at(c, v)});
      }
    }
  }
  // The exit cell still reports its observation even though no move leaves it.
  if (kAbsorbingExit) {
    for (const auto& v : kVariants) {
      w.add_edge(obs_vertex(kExit, v), action_vertex(kExit, v), {observation_at(kExit, v)});
    }
  }
  return w;
}

bool all_of_type(const std::set<VertexId>& members, bool pebble) {
  for (const auto& id : members) {
    // Vertex ids are "<cell>_<variant>(_in)"; the variant follows the first '_'.
    const auto underscore = id.find('_');
    if (underscore == std::string::npos) return false;
    if (is_pebble(id.substr(underscore + 1)) != pebble) return false;
  }
  return !members.empty();
}

Formula nuclear_secrecy(const SdeGraph& expanded) {
  // One clause per type-pure expanded state: whenever it is estimated, some
  // state of the other type (or a mixed state) of the same tier must be
  // estimated too.
  Formula phi;
  for (const auto& [id, members] : expanded.subset) {
    const bool pb = all_of_type(members, true);
    const bool br = all_of_type(members, false);
    if (!pb && !br) continue;
    Clause clause;
    clause.push_back({id, /*negated=*/true});
    const Kind tier = expanded.graph.kind(id);
    for (const auto& [other, other_members] : expanded.subset) {
      if (expanded.graph.kind(other) != tier) continue;
      if (pb && !all_of_type(other_members, true)) clause.push_back({other, false});
      if (br && !all_of_type(other_members, false)) clause.push_back({other, false});
    }
    phi.clauses.push_back(std::move(clause));
  }
  if (phi.clauses.empty()) throw InputError("nuclear stipulation came out empty");
  return phi;
}

}  // namespace

NuclearScenario build_nuclear() {
  NuclearScenario s;
  s.raw_world = build_nuclear_raw();
  const SdeGraph expanded = sde(s.raw_world);
  s.problem.world = expanded.graph;

  // Goals: at an exit with the variant fully resolved (the measurement at the
  // type-matching cell is the only resolver).
  for (const auto& [id, members] : expanded.subset) {
    if (members.size() != 1) continue;
    if (expanded.graph.kind(id) != Kind::Action) continue;
    const VertexId& raw = *members.begin();
    if (raw.rfind(cell_name(kExit) + "_", 0) == 0 && raw.find("_in") == std::string::npos)
      s.problem.goal.insert(id);
  }
  if (s.problem.goal.empty()) throw InputError("nuclear goal region came out empty");

  s.map = LabelMap(s.raw_world.actions(), s.raw_world.observations(),
                   {{"up", "vert"}, {"down", "vert"}, {"blue", "amb"}, {"none", "amb"}});
  s.phi = nuclear_secrecy(expanded);
  return s;
}

PentagonScenario build_pentagon() {
  // Five positions around the loop; arriving anywhere on it looks the same
  // (o2). Exits: a2 at p0 goes straight to the left station, p1 offers both
  // a2 to the left station and a3 to the right one. Station arrivals emit o1
  // (left) and o3 (right).
  PGraph w;
  for (const auto& a : {"a1", "a2", "a3"}) w.declare_action(a);
  for (const auto& o : {"o1", "o2", "o3"}) w.declare_observation(o);

  for (int i = 0; i < 5; ++i) {
    w.add_vertex("p" + std::to_string(i), Kind::Action, i == 0);
    w.add_vertex("q" + std::to_string(i), Kind::Observation);
  }
  for (const auto& v : {"sL", "sR"}) w.add_vertex(v, Kind::Action);
  for (const auto& v : {"qL", "qR"}) w.add_vertex(v, Kind::Observation);

  for (int i = 0; i < 5; ++i) {
    const std::string next = std::to_string((i + 1) % 5);
    w.add_edge("p" + std::to_string(i), "q" + next, {"a1"});
    w.add_edge("q" + std::to_string(i), "p" + std::to_string(i), {"o2"});
  }
  w.add_edge("p0", "qL", {"a2"});
  w.add_edge("p1", "qL", {"a2"});
  w.add_edge("p1", "qR", {"a3"});
  w.add_edge("qL", "sL", {"o1"});
  w.add_edge("qR", "sR", {"o3"});

  PentagonScenario s;
  s.problem.world = std::move(w);
  s.problem.goal = {"sL", "sR"};
  s.phi = parse_formula("(!sL | sR) & (!sR | sL)");
  return s;
}

}  // namespace pgplan
