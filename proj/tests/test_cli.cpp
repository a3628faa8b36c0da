#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <json.hpp>

#include "fixtures.hpp"
#include "pgplan/json_io.hpp"
#include "pgplan/planning.hpp"

using namespace pgplan;
using namespace pgplan::tests;

namespace {

std::string binary() {
  const char* bin = std::getenv("PGPLAN_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "PGPLAN_BIN must point at the pgplan binary");
  return bin;
}

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run(const std::string& args) {
  const std::string cmd = binary() + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string output;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) output.append(buf, n);
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), output};
}

std::string scratch_dir() {
  static int counter = 0;
  const std::string dir = "cli_scratch_" + std::to_string(counter++);
  const int rc = std::system(("rm -rf " + dir + " && mkdir -p " + dir).c_str());
  REQUIRE(rc == 0);
  return dir;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("validate rejects malformed graphs with exit code 3") {
  const std::string dir = scratch_dir();
  PGraph bad;
  bad.declare_action("a");
  bad.add_vertex("u", Kind::Action, true);
  bad.add_vertex("y", Kind::Observation, true);  // mixed initial kinds
  write_file_atomic(dir + "/bad.json", dump_canonical(pgraph_to_json(bad)));
  const RunResult r = run("validate --in " + dir + "/bad.json");
  CHECK(r.exit_code == 3);
  const auto report = nlohmann::json::parse(r.output);
  CHECK(report.at("outcome") == "invalid");
}

TEST_CASE("sde builds the subset vertex the figure promises") {
  const std::string dir = scratch_dir();
  write_file_atomic(dir + "/fig3.json", dump_canonical(pgraph_to_json(fig3_graph())));
  const RunResult r = run("sde --in " + dir + "/fig3.json --out " + dir + "/fig3_sde.json");
  CHECK(r.exit_code == 0);
  const PGraph out = pgraph_from_json(nlohmann::json::parse(slurp(dir + "/fig3_sde.json")));
  CHECK(out.has_vertex("{w3,w4}"));
  CHECK(out.has_vertex("{w3}"));
}

TEST_CASE("reruns on identical inputs produce identical outputs") {
  const std::string dir = scratch_dir();
  write_file_atomic(dir + "/fig3.json", dump_canonical(pgraph_to_json(fig3_graph())));
  REQUIRE(run("sde --in " + dir + "/fig3.json --out " + dir + "/a.json").exit_code == 0);
  REQUIRE(run("sde --in " + dir + "/fig3.json --out " + dir + "/b.json").exit_code == 0);
  CHECK(slurp(dir + "/a.json") == slurp(dir + "/b.json"));
}

TEST_CASE("the pentagon pipeline reproduces the solve and check verdicts") {
  const std::string dir = scratch_dir();
  REQUIRE(run("scenario pentagon --out-dir " + dir).exit_code == 0);

  // Joint synthesis succeeds.
  const RunResult solve = run("solve-plm --world " + dir + "/world.json --phi-file " + dir +
                              "/phi.txt --out-plan " + dir + "/plan.json --out-map " + dir +
                              "/map.json");
  CHECK(solve.exit_code == 0);
  const auto report = nlohmann::json::parse(solve.output);
  CHECK(report.at("outcome") == "found");

  // The synthesized pair passes check (exit 0).
  const RunResult ok = run("check --world " + dir + "/world.json --plan " + dir +
                           "/plan.json --map " + dir + "/map.json --divulged " + dir +
                           "/plan.json --phi-file " + dir + "/phi.txt");
  CHECK(ok.exit_code == 0);

  // The direct exit with the identity map fails check (exit 1).
  Plan direct;
  const PGraph world =
      pgraph_from_json_lenient(nlohmann::json::parse(slurp(dir + "/world.json")));
  for (const auto& a : world.actions()) direct.graph.declare_action(a);
  for (const auto& o : world.observations()) direct.graph.declare_observation(o);
  direct.graph.add_vertex("d0", Kind::Action, true);
  direct.graph.add_vertex("d1", Kind::Observation);
  direct.graph.add_vertex("d2", Kind::Action);
  direct.graph.add_edge("d0", "d1", {"a2"});
  direct.graph.add_edge("d1", "d2", {"o1"});
  direct.term = {"d2"};
  write_file_atomic(dir + "/direct.json", dump_canonical(plan_to_json(direct)));
  const RunResult bad = run("check --world " + dir + "/world.json --plan " + dir +
                            "/direct.json --divulged " + dir + "/direct.json --phi-file " + dir +
                            "/phi.txt");
  CHECK(bad.exit_code == 1);
}

TEST_CASE("solve-p finds a plan on a tiny world and respects --budget") {
  const std::string dir = scratch_dir();
  PlanningProblem problem;
  problem.world = single_path_world();
  problem.goal = {"g"};
  write_file_atomic(dir + "/world.json", dump_canonical(problem_to_json(problem)));

  const RunResult found =
      run("solve-p --world " + dir + "/world.json --phi \"g | !g\" --out " + dir + "/plan.json");
  CHECK(found.exit_code == 0);
  CHECK(nlohmann::json::parse(found.output).at("outcome") == "found");

  const RunResult none =
      run("solve-p --world " + dir + "/world.json --phi \"!g\" --out " + dir + "/plan2.json");
  CHECK(none.exit_code == 1);

  const RunResult capped = run("solve-p --world " + dir +
                               "/world.json --phi \"g | !g\" --budget 1 --out " + dir +
                               "/plan3.json");
  CHECK(capped.exit_code == 2);
  const auto report = nlohmann::json::parse(capped.output);
  CHECK(report.at("stats").at("nodes_expanded").get<std::uint64_t>() <= 1);
}

TEST_CASE("the nuclear pipeline solves from files") {
  const std::string dir = scratch_dir();
  REQUIRE(run("scenario nuclear --out-dir " + dir).exit_code == 0);
  // Defaults: the observer is the image of the world under the map, and the
  // divulged plan is the world itself.
  const RunResult solve = run("solve-p --world " + dir + "/world.json --map " + dir +
                              "/map.json --phi-file " + dir + "/phi.txt --out " + dir +
                              "/plan.json");
  CHECK(solve.exit_code == 0);
  const RunResult verify = run("check --world " + dir + "/world.json --plan " + dir +
                               "/plan.json --map " + dir + "/map.json --phi-file " + dir +
                               "/phi.txt");
  CHECK(verify.exit_code == 0);
}

TEST_CASE("solve-plm output is byte-identical across runs") {
  const std::string dir = scratch_dir();
  REQUIRE(run("scenario pentagon --out-dir " + dir).exit_code == 0);
  const std::string base = "solve-plm --world " + dir + "/world.json --phi-file " + dir +
                           "/phi.txt --out-plan " + dir;
  REQUIRE(run(base + "/p1.json --out-map " + dir + "/m1.json").exit_code == 0);
  REQUIRE(run(base + "/p2.json --out-map " + dir + "/m2.json").exit_code == 0);
  CHECK(slurp(dir + "/p1.json") == slurp(dir + "/p2.json"));
  CHECK(slurp(dir + "/m1.json") == slurp(dir + "/m2.json"));
}

TEST_CASE("stipulations over unknown symbols are input errors") {
  const std::string dir = scratch_dir();
  PlanningProblem problem;
  problem.world = single_path_world();
  problem.goal = {"g"};
  write_file_atomic(dir + "/world.json", dump_canonical(problem_to_json(problem)));
  const RunResult r = run("solve-p --world " + dir + "/world.json --phi \"ghost\" --out " + dir +
                          "/plan.json");
  CHECK(r.exit_code == 3);
}

TEST_CASE("explicit observer and divulged files feed solve-p") {
  const std::string dir = scratch_dir();
  PlanningProblem problem;
  problem.world = single_path_world();
  problem.goal = {"g"};
  write_file_atomic(dir + "/world.json", dump_canonical(problem_to_json(problem)));
  // The world graph doubles as the I-state graph (identity map) and the
  // divulged plan.
  write_file_atomic(dir + "/i.json", dump_canonical(pgraph_to_json(problem.world)));
  write_file_atomic(dir + "/d.json", dump_canonical(pgraph_to_json(problem.world)));
  const RunResult r = run("solve-p --world " + dir + "/world.json --observer " + dir +
                          "/i.json --divulged " + dir + "/d.json --phi \"g | !g\" --out " + dir +
                          "/plan.json");
  CHECK(r.exit_code == 0);

  // An observer that cannot trace the world's image is rejected by the
  // bounded pair check.
  PGraph bad;
  bad.declare_action("go");
  bad.declare_observation("ok");
  bad.add_vertex("i0", Kind::Action, true);
  write_file_atomic(dir + "/bad_i.json", dump_canonical(pgraph_to_json(bad)));
  const RunResult rejected = run("solve-p --world " + dir + "/world.json --observer " + dir +
                                 "/bad_i.json --phi \"g | !g\" --out " + dir + "/plan2.json");
  CHECK(rejected.exit_code == 3);
  const RunResult tolerated = run("solve-p --world " + dir + "/world.json --observer " + dir +
                                  "/bad_i.json --pair-check-bound 0 --phi \"g | !g\" --out " +
                                  dir + "/plan3.json");
  CHECK(tolerated.exit_code == 1);  // no plan can satisfy an observer that traces nothing
}

TEST_CASE("validate accepts a good graph with exit 0") {
  const std::string dir = scratch_dir();
  write_file_atomic(dir + "/fig3.json", dump_canonical(pgraph_to_json(fig3_graph())));
  CHECK(run("validate --in " + dir + "/fig3.json").exit_code == 0);
}

TEST_CASE("product, image and preimage transforms compose from the command line") {
  const std::string dir = scratch_dir();
  write_file_atomic(dir + "/fig3.json", dump_canonical(pgraph_to_json(fig3_graph())));
  write_file_atomic(dir + "/map.json", "{\"map\": {\"a1\": \"x\", \"a2\": \"x\"}}\n");

  REQUIRE(run("product --in " + dir + "/fig3.json --in2 " + dir + "/fig3.json --out " + dir +
              "/prod.json")
              .exit_code == 0);
  const PGraph prod = pgraph_from_json(nlohmann::json::parse(slurp(dir + "/prod.json")));
  CHECK(language_upto(prod, 4) == language_upto(fig3_graph(), 4));

  REQUIRE(run("image --in " + dir + "/fig3.json --map " + dir + "/map.json --out " + dir +
              "/img.json")
              .exit_code == 0);
  const PGraph img = pgraph_from_json(nlohmann::json::parse(slurp(dir + "/img.json")));
  CHECK(img.actions() == std::set<Event>{"x"});

  REQUIRE(run("preimage --in " + dir + "/img.json --map " + dir + "/map.json --out " + dir +
              "/pre.json")
              .exit_code == 0);
  const PGraph pre = pgraph_from_json(nlohmann::json::parse(slurp(dir + "/pre.json")));
  CHECK(pre.edges_from("v0").at("v1") == std::set<Event>{"a1", "a2"});
}

TEST_CASE("render emits DOT with the documented shapes") {
  const std::string dir = scratch_dir();
  write_file_atomic(dir + "/fig3.json", dump_canonical(pgraph_to_json(fig3_graph())));
  REQUIRE(run("render --in " + dir + "/fig3.json --out " + dir + "/fig3.dot").exit_code == 0);
  const std::string dot = slurp(dir + "/fig3.dot");
  CHECK(dot.find("shape=square, peripheries=2") != std::string::npos);
  CHECK(dot.find("shape=circle") != std::string::npos);
}

TEST_CASE("reports carry input digests and are machine readable") {
  const std::string dir = scratch_dir();
  write_file_atomic(dir + "/fig3.json", dump_canonical(pgraph_to_json(fig3_graph())));
  const RunResult r = run("sde --in " + dir + "/fig3.json --out " + dir + "/out.json --report " +
                          dir + "/report.json");
  CHECK(r.exit_code == 0);
  const auto report = nlohmann::json::parse(slurp(dir + "/report.json"));
  CHECK(report.at("inputs").size() == 1);
  CHECK(report.at("outcome") == "found");
  CHECK(report.at("artifacts").size() == 1);
}
