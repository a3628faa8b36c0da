#pragma once

#include <set>
#include <string>
#include <vector>

#include "pgplan/pgraph.hpp"

namespace pgplan {

struct Literal {
  std::string symbol;   // a world vertex id
  bool negated = false;
  bool operator==(const Literal& o) const { return symbol == o.symbol && negated == o.negated; }
};

using Clause = std::vector<Literal>;

// A stipulation in conjunctive normal form: nonempty clauses of nonempty
// literal lists over world-vertex symbols.
struct Formula {
  std::vector<Clause> clauses;
  bool operator==(const Formula& o) const { return clauses == o.clauses; }
};

// Grammar: formula := clause ('&' clause)*
//          clause  := '(' disjunction ')' | disjunction
//          disjunction := literal ('|' literal)*
//          literal := '!'? symbol
// Symbols are any run of characters other than whitespace and "!|&()".
Formula parse_formula(const std::string& text);

std::string print_formula(const Formula& f);

// A symbol holds iff its vertex is a member of the belief; connectives are
// standard. The empty belief makes every positive literal false.
bool evaluate(const Formula& f, const std::set<VertexId>& belief);

// Symbols that do not name a vertex of the world graph.
std::vector<std::string> unknown_symbols(const Formula& f, const PGraph& world);

}  // namespace pgplan
