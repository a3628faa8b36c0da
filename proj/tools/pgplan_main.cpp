// pgplan: command-line front end for the planner, verifier and transforms.
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pgplan/errors.hpp"
#include "pgplan/json_io.hpp"
#include "pgplan/observer.hpp"
#include "pgplan/scenarios.hpp"
#include "pgplan/seek_p.hpp"
#include "pgplan/seek_plm.hpp"
#include "pgplan/stipulation.hpp"

namespace {

using namespace pgplan;

constexpr int kExitFound = 0;
constexpr int kExitNone = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitInputError = 3;
constexpr int kExitInternalError = 4;

struct RunReport {
  std::string command;
  std::map<std::string, std::string> inputs;  // path -> content digest
  std::string outcome = "invalid";
  std::string detail;
  SearchStats stats;
  std::vector<std::string> artifacts;
  std::int64_t elapsed_ms = 0;
};

std::string fnv1a_digest(const std::string& bytes) {
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

class Session {
 public:
  explicit Session(std::string command) { report_.command = std::move(command); }

  nlohmann::json load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    report_.inputs[path] = fnv1a_digest(bytes);
    try {
      return nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::parse_error& e) {
      throw InputError("cannot parse '" + path + "': " + e.what());
    }
  }

  std::string load_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    report_.inputs[path] = fnv1a_digest(bytes);
    return bytes;
  }

  void emit_artifact(const std::string& path, const std::string& contents) {
    write_file_atomic(path, contents);
    report_.artifacts.push_back(path);
  }

  RunReport& report() { return report_; }

 private:
  RunReport report_;
};

void print_report(const RunReport& report, const std::string& report_path) {
  nlohmann::ordered_json j;
  j["command"] = report.command;
  j["inputs"] = nlohmann::ordered_json::object();
  for (const auto& [path, digest] : report.inputs) j["inputs"][path] = digest;
  j["outcome"] = report.outcome;
  if (!report.detail.empty()) j["detail"] = report.detail;
  j["stats"] = {{"nodes_expanded", report.stats.nodes_expanded},
                {"partitions_tried", report.stats.partitions_tried},
                {"beliefs_evaluated", report.stats.beliefs_evaluated}};
  j["artifacts"] = report.artifacts;
  j["elapsed_ms"] = report.elapsed_ms;
  const std::string text = dump_canonical(j);
  if (report_path.empty()) {
    std::cout << text;
  } else {
    write_file_atomic(report_path, text);
  }
}

// Shared flags for the commands that take an observer setting.
struct ObserverArgs {
  std::string observer_path;
  std::string divulged_path;
  std::string map_path;
  std::size_t pair_check_bound = 4;
};

struct Loaded {
  PlanningProblem problem;
  LabelMap map;
  ObserverPair observer;
};

LabelMap load_map_or_identity(Session& session, const std::string& path, const PGraph& world) {
  if (path.empty()) return LabelMap::identity_for(world);
  return labelmap_from_json(session.load(path), world.actions(), world.observations());
}

Loaded load_setting(Session& session, const std::string& world_path,
                    const std::vector<std::string>& goal, const ObserverArgs& oargs,
                    const Plan* plan_for_pair_check) {
  Loaded out;
  out.problem = problem_from_json(session.load(world_path));
  if (!goal.empty()) out.problem.goal = std::set<VertexId>(goal.begin(), goal.end());
  for (const auto& v : out.problem.goal) {
    if (!out.problem.world.has_vertex(v))
      throw InputError("goal names unknown vertex '" + v + "'");
  }
  if (out.problem.goal.empty()) throw InputError("no goal region given (file key or --goal)");
  out.map = load_map_or_identity(session, oargs.map_path, out.problem.world);
  PGraph istate = oargs.observer_path.empty()
                      ? finest_observer(out.problem.world, out.map)
                      : pgraph_from_json_lenient(session.load(oargs.observer_path));
  // A divulged plan may arrive as a plan file; its termination region plays
  // no role in what the observer can trace.
  PGraph divulged = oargs.divulged_path.empty()
                        ? divulged_plan_world(out.problem.world)
                        : plan_from_json(session.load(oargs.divulged_path)).graph;
  out.observer = make_observer_pair(std::move(istate), std::move(divulged), out.problem.world,
                                    out.map, oargs.pair_check_bound, plan_for_pair_check);
  return out;
}

Formula load_phi(Session& session, const std::string& phi_text, const std::string& phi_file) {
  if (!phi_text.empty() && !phi_file.empty())
    throw InputError("give either --phi or --phi-file, not both");
  if (!phi_text.empty()) return parse_formula(phi_text);
  if (!phi_file.empty()) return parse_formula(session.load_text(phi_file));
  throw InputError("a stipulation is required (--phi or --phi-file)");
}

void add_observer_flags(CLI::App* cmd, ObserverArgs& args) {
  cmd->add_option("--observer", args.observer_path,
                  "I-state graph JSON (default: image of the world under --map)");
  cmd->add_option("--divulged", args.divulged_path,
                  "divulged plan JSON (default: the world graph)");
  cmd->add_option("--map", args.map_path, "label map JSON (default: identity)");
  cmd->add_option("--pair-check-bound", args.pair_check_bound,
                  "bounded observer-pair invariant check; 0 disables")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"planner and verifier for worlds watched by an outside observer"};
  app.require_subcommand(1);

  std::string report_path;
  app.add_option("--report", report_path, "write the run report JSON here instead of stdout");

  // validate
  auto* cmd_validate = app.add_subcommand("validate", "check p-graph well-formedness");
  std::string in_path, in2_path, out_path, map_path;
  cmd_validate->add_option("--in", in_path, "graph JSON")->required();

  // transforms
  auto* cmd_sde = app.add_subcommand("sde", "state-determined expansion");
  cmd_sde->add_option("--in", in_path, "graph JSON")->required();
  cmd_sde->add_option("--out", out_path, "output graph JSON")->required();

  auto* cmd_product = app.add_subcommand("product", "tensor product of two graphs");
  cmd_product->add_option("--in", in_path, "first graph JSON")->required();
  cmd_product->add_option("--in2", in2_path, "second graph JSON")->required();
  cmd_product->add_option("--out", out_path, "output graph JSON")->required();

  auto* cmd_image = app.add_subcommand("image", "apply a label map to a graph");
  cmd_image->add_option("--in", in_path, "graph JSON")->required();
  cmd_image->add_option("--map", map_path, "label map JSON")->required();
  cmd_image->add_option("--out", out_path, "output graph JSON")->required();

  auto* cmd_preimage = app.add_subcommand("preimage", "preimage of a graph under a label map");
  cmd_preimage->add_option("--in", in_path, "image-space graph JSON")->required();
  cmd_preimage->add_option("--map", map_path, "label map JSON")->required();
  cmd_preimage->add_option("--out", out_path, "output graph JSON")->required();

  auto* cmd_render = app.add_subcommand("render", "GraphViz DOT export");
  cmd_render->add_option("--in", in_path, "graph JSON")->required();
  cmd_render->add_option("--out", out_path, "output .dot path")->required();

  // check
  auto* cmd_check = app.add_subcommand("check", "verify a plan against problem and stipulation");
  std::string world_path, plan_path, phi_text, phi_file;
  std::vector<std::string> goal_flag, term_flag;
  ObserverArgs check_oargs;
  cmd_check->add_option("--world", world_path, "world/problem JSON")->required();
  cmd_check->add_option("--goal", goal_flag, "goal vertex ids")->delimiter(',');
  cmd_check->add_option("--plan", plan_path, "plan JSON")->required();
  cmd_check->add_option("--term", term_flag, "termination vertex ids")->delimiter(',');
  cmd_check->add_option("--phi", phi_text, "stipulation formula");
  cmd_check->add_option("--phi-file", phi_file, "stipulation formula file");
  add_observer_flags(cmd_check, check_oargs);

  // solve-p
  auto* cmd_solvep = app.add_subcommand("solve-p", "find a plan for a fixed disclosure policy");
  ObserverArgs solvep_oargs;
  std::size_t depth = 0;
  std::uint64_t budget = 0;
  unsigned workers = 1;
  cmd_solvep->add_option("--world", world_path, "world/problem JSON")->required();
  cmd_solvep->add_option("--goal", goal_flag, "goal vertex ids")->delimiter(',');
  cmd_solvep->add_option("--phi", phi_text, "stipulation formula");
  cmd_solvep->add_option("--phi-file", phi_file, "stipulation formula file");
  cmd_solvep->add_option("--depth", depth, "plan depth bound (default |W|*|D|*|sde(I)|)");
  cmd_solvep->add_option("--budget", budget, "node expansion budget (0 = unlimited)");
  cmd_solvep->add_option("--workers", workers, "worker count (runs serially; kept for scripts)");
  cmd_solvep->add_option("--out", out_path, "output plan JSON")->required();
  add_observer_flags(cmd_solvep, solvep_oargs);

  // solve-plm
  auto* cmd_solveplm =
      app.add_subcommand("solve-plm", "find a plan and label map jointly (finest observer, D = P)");
  std::string out_plan_path, out_map_path;
  cmd_solveplm->add_option("--world", world_path, "world/problem JSON")->required();
  cmd_solveplm->add_option("--goal", goal_flag, "goal vertex ids")->delimiter(',');
  cmd_solveplm->add_option("--phi", phi_text, "stipulation formula");
  cmd_solveplm->add_option("--phi-file", phi_file, "stipulation formula file");
  cmd_solveplm->add_option("--budget", budget, "node expansion budget (0 = unlimited)");
  cmd_solveplm->add_option("--workers", workers, "worker count (runs serially; kept for scripts)");
  cmd_solveplm->add_option("--out-plan", out_plan_path, "output plan JSON")->required();
  cmd_solveplm->add_option("--out-map", out_map_path, "output label map JSON")->required();

  // scenario
  auto* cmd_scenario = app.add_subcommand("scenario", "emit a bundled example scenario");
  std::string scenario_name, out_dir;
  cmd_scenario->add_option("name", scenario_name, "nuclear | pentagon")->required();
  cmd_scenario->add_option("--out-dir", out_dir, "output directory")->required();

  for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitFound : kExitInputError;
  }

  Session session(argc > 1 ? argv[1] : "");
  const auto started = std::chrono::steady_clock::now();
  int exit_code = kExitInputError;

  try {
    if (*cmd_validate) {
      const PGraph g = pgraph_from_json_lenient(session.load(in_path));
      const ValidationReport report = validate(g);
      for (const auto& v : report.violations) std::cerr << "violation: " << v << "\n";
      for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
      session.report().outcome = report.ok() ? "found" : "invalid";
      session.report().detail = std::to_string(report.violations.size()) + " violations, " +
                                std::to_string(report.warnings.size()) + " warnings";
      exit_code = report.ok() ? kExitFound : kExitInputError;
    } else if (*cmd_sde) {
      const PGraph g = pgraph_from_json_lenient(session.load(in_path));
      session.emit_artifact(out_path, dump_canonical(pgraph_to_json(sde(g).graph)));
      session.report().outcome = "found";
      exit_code = kExitFound;
    } else if (*cmd_product) {
      const PGraph g1 = pgraph_from_json_lenient(session.load(in_path));
      const PGraph g2 = pgraph_from_json_lenient(session.load(in2_path));
      session.emit_artifact(out_path, dump_canonical(pgraph_to_json(tensor_product(g1, g2))));
      session.report().outcome = "found";
      exit_code = kExitFound;
    } else if (*cmd_image) {
      const PGraph g = pgraph_from_json_lenient(session.load(in_path));
      const LabelMap h = load_map_or_identity(session, map_path, g);
      session.emit_artifact(out_path, dump_canonical(pgraph_to_json(image_graph(h, g))));
      session.report().outcome = "found";
      exit_code = kExitFound;
    } else if (*cmd_preimage) {
      const PGraph g = pgraph_from_json_lenient(session.load(in_path));
      nlohmann::json mj = session.load(map_path);
      // The input graph lives in image space, so the map's domain comes from
      // the file's entries; image symbols no entry maps to stay identity.
      std::set<Event> actions, observations;
      std::set<Event> covered;
      if (mj.contains("map")) {
        for (const auto& [event, image] : mj.at("map").items()) {
          if (!image.is_string()) throw InputError("label map images must be strings");
          const std::string x = image.get<std::string>();
          if (g.actions().count(x)) actions.insert(event);
          else if (g.observations().count(x)) observations.insert(event);
          else throw InputError("image symbol '" + x + "' does not appear in the graph's alphabets");
          covered.insert(x);
        }
      }
      for (const auto& x : g.actions())
        if (!covered.count(x)) actions.insert(x);
      for (const auto& x : g.observations())
        if (!covered.count(x)) observations.insert(x);
      const LabelMap h = labelmap_from_json(mj, actions, observations);
      session.emit_artifact(out_path, dump_canonical(pgraph_to_json(preimage_graph(h, g))));
      session.report().outcome = "found";
      exit_code = kExitFound;
    } else if (*cmd_render) {
      const PGraph g = pgraph_from_json_lenient(session.load(in_path));
      session.emit_artifact(out_path, to_dot(g));
      session.report().outcome = "found";
      exit_code = kExitFound;
    } else if (*cmd_check) {
      Plan plan = plan_from_json(session.load(plan_path));
      if (!term_flag.empty()) plan.term = std::set<VertexId>(term_flag.begin(), term_flag.end());
      const Loaded setting = load_setting(session, world_path, goal_flag, check_oargs, &plan);
      const Formula phi = load_phi(session, phi_text, phi_file);
      const CheckVerdict verdict =
          check(setting.problem, plan, setting.observer.divulged, setting.observer.istate_graph,
                setting.map, phi, &session.report().stats);
      session.report().outcome = verdict.ok ? "found" : "none";
      session.report().detail = verdict.ok ? "plan solves the problem and meets the stipulation"
                                           : verdict.diagnostic;
      exit_code = verdict.ok ? kExitFound : kExitNone;
    } else if (*cmd_solvep) {
      const Loaded setting = load_setting(session, world_path, goal_flag, solvep_oargs, nullptr);
      const Formula phi = load_phi(session, phi_text, phi_file);
      SeekPConfig config;
      if (depth > 0) config.depth_bound = depth;
      if (budget > 0) config.node_budget = budget;
      if (workers > 1)
        session.report().detail = "workers > 1 requested; running the deterministic serial search";
      SeekPResult result = seek_plan(setting.problem, setting.observer, setting.map, phi, config);
      session.report().stats = result.stats;
      session.report().outcome = outcome_name(result.outcome);
      if (session.report().detail.empty()) session.report().detail = result.message;
      if (result.plan) {
        session.emit_artifact(out_path, dump_canonical(plan_to_json(*result.plan)));
        exit_code = kExitFound;
      } else {
        exit_code = result.outcome == SeekOutcome::None ? kExitNone : kExitInconclusive;
      }
    } else if (*cmd_solveplm) {
      Session& s = session;
      PlanningProblem problem = problem_from_json(s.load(world_path));
      if (!goal_flag.empty()) problem.goal = std::set<VertexId>(goal_flag.begin(), goal_flag.end());
      if (problem.goal.empty()) throw InputError("no goal region given (file key or --goal)");
      const Formula phi = load_phi(session, phi_text, phi_file);
      SeekPlmConfig config;
      if (budget > 0) config.node_budget = budget;
      if (workers > 1)
        session.report().detail = "workers > 1 requested; running the deterministic serial search";
      SeekPlmResult result = seek_plan_and_map(problem, phi, config);
      session.report().stats = result.stats;
      session.report().outcome = outcome_name(result.outcome);
      if (session.report().detail.empty()) session.report().detail = result.message;
      if (result.plan && result.map) {
        session.emit_artifact(out_plan_path, dump_canonical(plan_to_json(*result.plan)));
        session.emit_artifact(out_map_path, dump_canonical(labelmap_to_json(*result.map)));
        exit_code = kExitFound;
      } else {
        exit_code = result.outcome == SeekOutcome::None ? kExitNone : kExitInconclusive;
      }
    } else if (*cmd_scenario) {
      if (scenario_name == "nuclear") {
        const NuclearScenario s = build_nuclear();
        session.emit_artifact(out_dir + "/world_raw.json", dump_canonical(pgraph_to_json(s.raw_world)));
        session.emit_artifact(out_dir + "/world.json", dump_canonical(problem_to_json(s.problem)));
        session.emit_artifact(out_dir + "/map.json", dump_canonical(labelmap_to_json(s.map)));
        session.emit_artifact(out_dir + "/phi.txt", print_formula(s.phi) + "\n");
      } else if (scenario_name == "pentagon") {
        const PentagonScenario s = build_pentagon();
        session.emit_artifact(out_dir + "/world.json", dump_canonical(problem_to_json(s.problem)));
        session.emit_artifact(out_dir + "/phi.txt", print_formula(s.phi) + "\n");
      } else {
        throw InputError("unknown scenario '" + scenario_name + "' (use nuclear or pentagon)");
      }
      session.report().outcome = "found";
      exit_code = kExitFound;
    }
  } catch (const InputError& e) {
    session.report().outcome = "invalid";
    session.report().detail = e.what();
    std::cerr << "error: " << e.what() << "\n";
    exit_code = kExitInputError;
  } catch (const ParseError& e) {
    session.report().outcome = "invalid";
    session.report().detail = e.what();
    std::cerr << "error: " << e.what() << "\n";
    exit_code = kExitInputError;
  } catch (const std::exception& e) {
    session.report().outcome = "invalid";
    session.report().detail = e.what();
    std::cerr << "internal error: " << e.what() << "\n";
    exit_code = kExitInternalError;
  }

  session.report().elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                    std::chrono::steady_clock::now() - started)
                                    .count();
  try {
    print_report(session.report(), report_path);
  } catch (const std::exception& e) {
    std::cerr << "error: cannot write report: " << e.what() << "\n";
    return kExitInternalError;
  }
  return exit_code;
}
