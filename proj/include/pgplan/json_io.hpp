#pragma once

#include <string>

#include <json.hpp>

#include "pgplan/labelmap.hpp"
#include "pgplan/pgraph.hpp"
#include "pgplan/planning.hpp"

namespace pgplan {

// Graph files are objects with exactly the keys "vertices", "edges",
// "actions" and "observations"; problem files may add "goal" and plan files
// "term". Unknown keys are rejected. Serialization is canonical: everything
// sorted, two-space indentation, trailing newline.

PGraph pgraph_from_json(const nlohmann::json& j);
nlohmann::ordered_json pgraph_to_json(const PGraph& g);

// Accepts graph, problem or plan files, ignoring "goal" and "term"; for
// commands that only care about the transition structure.
PGraph pgraph_from_json_lenient(const nlohmann::json& j);

PlanningProblem problem_from_json(const nlohmann::json& j);
nlohmann::ordered_json problem_to_json(const PlanningProblem& p);

Plan plan_from_json(const nlohmann::json& j);
nlohmann::ordered_json plan_to_json(const Plan& p);

// Label-map files are {"map": {event: image}}; events omitted from the map
// are identity-mapped over the supplied domains.
LabelMap labelmap_from_json(const nlohmann::json& j, const std::set<Event>& action_domain,
                            const std::set<Event>& observation_domain);
nlohmann::ordered_json labelmap_to_json(const LabelMap& h);

// GraphViz export: observation vertices as circles, action vertices as
// squares, initial vertices doubled, edge labels comma-joined.
std::string to_dot(const PGraph& g, const std::string& name = "pgraph");

std::string dump_canonical(const nlohmann::ordered_json& j);

// File helpers; writes are atomic (temp file + rename).
nlohmann::json load_json_file(const std::string& path);
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace pgplan
