#include <doctest.h>

#include "pgplan/json_io.hpp"
#include "pgplan/observer.hpp"
#include "pgplan/scenarios.hpp"
#include "pgplan/seek_p.hpp"
#include "pgplan/seek_plm.hpp"
#include "pgplan/errors.hpp"

using namespace pgplan;

TEST_CASE("nuclear scenario structure") {
  const NuclearScenario s = build_nuclear();
  CHECK(s.raw_world.vertex_count() == 96);
  CHECK(s.problem.world.vertex_count() == 154);
  CHECK(s.raw_world.observations().size() == 5);
  CHECK(s.raw_world.actions().size() == 4);
  CHECK(validate(s.raw_world).ok());
  CHECK(validate(s.problem.world).ok());
  CHECK(is_state_determined(s.problem.world));
  CHECK_FALSE(s.problem.goal.empty());
  for (const auto& g : s.problem.goal) CHECK(s.problem.world.has_vertex(g));
  CHECK(unknown_symbols(s.phi, s.problem.world).empty());
}

TEST_CASE("nuclear generator is deterministic") {
  const NuclearScenario a = build_nuclear();
  const NuclearScenario b = build_nuclear();
  CHECK(dump_canonical(pgraph_to_json(a.raw_world)) == dump_canonical(pgraph_to_json(b.raw_world)));
  CHECK(dump_canonical(problem_to_json(a.problem)) == dump_canonical(problem_to_json(b.problem)));
  CHECK(dump_canonical(labelmap_to_json(a.map)) == dump_canonical(labelmap_to_json(b.map)));
  CHECK(print_formula(a.phi) == print_formula(b.phi));
}

TEST_CASE("nuclear map hides the facility type but discloses radioactivity") {
  const NuclearScenario s = build_nuclear();
  CHECK(s.map.image_of("up") == s.map.image_of("down"));
  CHECK(s.map.image_of("blue") == s.map.image_of("none"));
  CHECK(s.map.image_of("hi") == "hi");
  CHECK(s.map.image_of("lo") == "lo");
  CHECK(s.map.image_of("left") != s.map.image_of("right"));
}

TEST_CASE("pentagon scenario structure") {
  const PentagonScenario s = build_pentagon();
  CHECK(validate(s.problem.world).ok());
  CHECK(is_state_determined(s.problem.world));
  CHECK(s.problem.goal == std::set<VertexId>{"sL", "sR"});
  CHECK(s.problem.world.actions() == std::set<Event>{"a1", "a2", "a3"});
  CHECK(s.problem.world.observations() == std::set<Event>{"o1", "o2", "o3"});
  // Five loop positions plus the stations.
  std::size_t actions = 0;
  for (const auto& [v, kind] : s.problem.world.vertices())
    if (kind == Kind::Action) ++actions;
  CHECK(actions == 7);
  CHECK(dump_canonical(problem_to_json(s.problem)) ==
        dump_canonical(problem_to_json(build_pentagon().problem)));
}

TEST_CASE("nuclear plans teach the observer the radioactivity but not the type") {
  const NuclearScenario s = build_nuclear();
  ObserverPair observer{finest_observer(s.problem.world, s.map), s.problem.world};
  const SeekPResult r = seek_plan(s.problem, observer, s.map, s.phi);
  REQUIRE(r.outcome == SeekOutcome::Found);

  // Raw-world variants behind each expanded state.
  const SdeGraph expanded = sde(s.raw_world);
  auto variants_of = [&](const Belief& belief) {
    std::set<std::string> variants;
    for (const auto& id : belief) {
      for (const auto& raw : expanded.subset.at(id)) {
        const auto underscore = raw.find('_');
        REQUIRE(underscore != std::string::npos);
        std::string v = raw.substr(underscore + 1);
        if (const auto in = v.find('_'); in != std::string::npos) v = v.substr(0, in);
        variants.insert(v);
      }
    }
    return variants;
  };

  const BeliefContext context(observer.istate_graph, observer.divulged, s.problem.world, s.map);
  int terminals = 0;
  for (const auto& exec : language_upto(r.plan->graph, 40)) {
    const auto reached = reached_vertices(r.plan->graph, exec);
    REQUIRE(reached.size() == 1);
    if (!r.plan->term.count(*reached.begin())) continue;
    ++terminals;
    const auto variants = variants_of(context.belief_after(exec));
    bool hi = false, lo = false, pebble = false, breeder = false;
    for (const auto& v : variants) {
      (v.substr(2) == "hi" ? hi : lo) = true;
      (v[0] == 'p' ? pebble : breeder) = true;
    }
    CHECK((hi ^ lo));          // radioactivity resolved for the observer
    CHECK((pebble && breeder));  // facility type still ambiguous
  }
  CHECK(terminals >= 2);  // at least one ending per radioactivity level
}

TEST_CASE("the pentagon image graph merges the conflated exit labels") {
  const PentagonScenario s = build_pentagon();
  const LabelMap h(s.problem.world.actions(), s.problem.world.observations(),
                   {{"a2", "a2+a3"}, {"a3", "a2+a3"}, {"o1", "o1+o3"}, {"o3", "o1+o3"}});
  const PGraph img = finest_observer(s.problem.world, h);
  CHECK(img.edges_from("p1").at("qL") == std::set<Event>{"a2+a3"});
  CHECK(img.edges_from("p1").at("qR") == std::set<Event>{"a2+a3"});
  CHECK(img.edges_from("qL").at("sL") == std::set<Event>{"o1+o3"});
}

TEST_CASE("pentagon admits the immediate exit when stipulations are ignored") {
  const PentagonScenario s = build_pentagon();
  // One step: a2 at p0 reaches the left station.
  Plan direct;
  for (const auto& a : s.problem.world.actions()) direct.graph.declare_action(a);
  for (const auto& o : s.problem.world.observations()) direct.graph.declare_observation(o);
  direct.graph.add_vertex("d0", Kind::Action, true);
  direct.graph.add_vertex("d1", Kind::Observation);
  direct.graph.add_vertex("d2", Kind::Action);
  direct.graph.add_edge("d0", "d1", {"a2"});
  direct.graph.add_edge("d1", "d2", {"o1"});
  direct.term = {"d2"};
  CHECK(check_solves(direct, s.problem).solves);

  // But with the stipulation it fails, under the identity map and even under
  // the synthesized conflating map.
  const LabelMap id = LabelMap::identity_for(s.problem.world);
  const CheckVerdict with_id =
      check(s.problem, direct, direct.graph, image_graph(id, s.problem.world), id, s.phi);
  CHECK_FALSE(with_id.ok);
}
