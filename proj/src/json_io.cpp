#include "pgplan/json_io.hpp"

#include <cstdio>
#include <fstream>

#include "pgplan/errors.hpp"

namespace pgplan {

namespace {

void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                         const std::string& what) {
  if (!j.is_object()) throw InputError(what + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw InputError(what + " has unknown key \"" + key + "\"");
  }
}

std::set<std::string> string_set(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array()) throw InputError(what + " must be an array of strings");
  std::set<std::string> out;
  for (const auto& item : j) {
    if (!item.is_string()) throw InputError(what + " must contain only strings");
    out.insert(item.get<std::string>());
  }
  return out;
}

PGraph pgraph_from_json_impl(const nlohmann::json& j, const std::set<std::string>& extra_keys,
                             const std::string& what) {
  std::set<std::string> allowed{"vertices", "edges", "actions", "observations"};
  allowed.insert(extra_keys.begin(), extra_keys.end());
  reject_unknown_keys(j, allowed, what);
  for (const auto& key : {"vertices", "edges", "actions", "observations"}) {
    if (!j.contains(key)) throw InputError(what + " is missing key \"" + std::string(key) + "\"");
  }

  PGraph g;
  for (const auto& a : string_set(j.at("actions"), "\"actions\"")) g.declare_action(a);
  for (const auto& o : string_set(j.at("observations"), "\"observations\""))
    g.declare_observation(o);

  if (!j.at("vertices").is_array()) throw InputError("\"vertices\" must be an array");
  for (const auto& v : j.at("vertices")) {
    reject_unknown_keys(v, {"id", "kind", "initial"}, "vertex");
    if (!v.contains("id") || !v.at("id").is_string())
      throw InputError("vertex entries need a string \"id\"");
    if (!v.contains("kind") || !v.at("kind").is_string())
      throw InputError("vertex entries need a \"kind\" of \"action\" or \"observation\"");
    const std::string kind_text = v.at("kind").get<std::string>();
    Kind kind;
    if (kind_text == "action") kind = Kind::Action;
    else if (kind_text == "observation") kind = Kind::Observation;
    else throw InputError("vertex kind must be \"action\" or \"observation\", got \"" + kind_text + "\"");
    bool initial = false;
    if (v.contains("initial")) {
      if (!v.at("initial").is_boolean()) throw InputError("vertex \"initial\" must be a boolean");
      initial = v.at("initial").get<bool>();
    }
    g.add_vertex(v.at("id").get<std::string>(), kind, initial);
  }

  if (!j.at("edges").is_array()) throw InputError("\"edges\" must be an array");
  for (const auto& e : j.at("edges")) {
    reject_unknown_keys(e, {"from", "to", "labels"}, "edge");
    for (const auto& key : {"from", "to", "labels"}) {
      if (!e.contains(key)) throw InputError("edge entries need \"from\", \"to\" and \"labels\"");
    }
    if (!e.at("from").is_string() || !e.at("to").is_string())
      throw InputError("edge endpoints must be strings");
    const auto labels = string_set(e.at("labels"), "edge \"labels\"");
    if (labels.empty()) throw InputError("edge label lists must be nonempty");
    g.add_edge(e.at("from").get<std::string>(), e.at("to").get<std::string>(), labels);
  }
  return g;
}

nlohmann::ordered_json pgraph_to_json_impl(const PGraph& g) {
  nlohmann::ordered_json j;
  j["vertices"] = nlohmann::ordered_json::array();
  for (const auto& [id, kind] : g.vertices()) {
    nlohmann::ordered_json v;
    v["id"] = id;
    v["kind"] = kind_name(kind);
    v["initial"] = g.initial().count(id) != 0;
    j["vertices"].push_back(std::move(v));
  }
  j["edges"] = nlohmann::ordered_json::array();
  for (const auto& [from, targets] : g.adjacency()) {
    for (const auto& [to, labels] : targets) {
      nlohmann::ordered_json e;
      e["from"] = from;
      e["to"] = to;
      e["labels"] = labels;
      j["edges"].push_back(std::move(e));
    }
  }
  j["actions"] = g.actions();
  j["observations"] = g.observations();
  return j;
}

}  // namespace

PGraph pgraph_from_json(const nlohmann::json& j) { return pgraph_from_json_impl(j, {}, "graph"); }

PGraph pgraph_from_json_lenient(const nlohmann::json& j) {
  return pgraph_from_json_impl(j, {"goal", "term"}, "graph");
}

nlohmann::ordered_json pgraph_to_json(const PGraph& g) { return pgraph_to_json_impl(g); }

PlanningProblem problem_from_json(const nlohmann::json& j) {
  PlanningProblem p;
  p.world = pgraph_from_json_impl(j, {"goal"}, "problem");
  if (j.contains("goal")) {
    p.goal = string_set(j.at("goal"), "\"goal\"");
    for (const auto& v : p.goal) {
      if (!p.world.has_vertex(v)) throw InputError("goal names unknown vertex '" + v + "'");
    }
  }
  return p;
}

nlohmann::ordered_json problem_to_json(const PlanningProblem& p) {
  nlohmann::ordered_json j = pgraph_to_json_impl(p.world);
  j["goal"] = p.goal;
  return j;
}

Plan plan_from_json(const nlohmann::json& j) {
  Plan p;
  p.graph = pgraph_from_json_impl(j, {"term"}, "plan");
  if (j.contains("term")) {
    p.term = string_set(j.at("term"), "\"term\"");
    for (const auto& v : p.term) {
      if (!p.graph.has_vertex(v)) throw InputError("term names unknown vertex '" + v + "'");
    }
  }
  return p;
}

nlohmann::ordered_json plan_to_json(const Plan& p) {
  nlohmann::ordered_json j = pgraph_to_json_impl(p.graph);
  j["term"] = p.term;
  return j;
}

LabelMap labelmap_from_json(const nlohmann::json& j, const std::set<Event>& action_domain,
                            const std::set<Event>& observation_domain) {
  reject_unknown_keys(j, {"map"}, "label map");
  std::map<Event, Event> mapping;
  if (j.contains("map")) {
    if (!j.at("map").is_object()) throw InputError("label map \"map\" must be an object");
    for (const auto& [event, image] : j.at("map").items()) {
      if (!image.is_string()) throw InputError("label map images must be strings");
      mapping[event] = image.get<std::string>();
    }
  }
  return LabelMap(action_domain, observation_domain, mapping);
}

nlohmann::ordered_json labelmap_to_json(const LabelMap& h) {
  nlohmann::ordered_json j;
  j["map"] = nlohmann::ordered_json::object();
  for (const auto& [event, image] : h.mapping()) j["map"][event] = image;
  return j;
}

std::string to_dot(const PGraph& g, const std::string& name) {
  auto quote = [](const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out + "\"";
  };
  std::string dot = "digraph " + quote(name) + " {\n";
  for (const auto& [id, kind] : g.vertices()) {
    const bool initial = g.initial().count(id) != 0;
    dot += "  " + quote(id) + " [shape=" +
           (kind == Kind::Observation ? "circle" : "square") +
           (initial ? ", peripheries=2" : "") + "];\n";
  }
  for (const auto& [from, targets] : g.adjacency()) {
    for (const auto& [to, labels] : targets) {
      std::string label;
      for (const auto& l : labels) {
        if (!label.empty()) label += ",";
        label += l;
      }
      dot += "  " + quote(from) + " -> " + quote(to) + " [label=" + quote(label) + "];\n";
    }
  }
  dot += "}\n";
  return dot;
}

std::string dump_canonical(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("cannot parse '" + path + "': " + e.what());
  }
  return j;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + tmp + "'");
    out << contents;
    if (!out.flush()) throw InputError("failed writing '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw InputError("cannot move '" + tmp + "' into place");
}

}  // namespace pgplan
