#include "pgplan/stipulation.hpp"

#include <cctype>

#include "pgplan/errors.hpp"

namespace pgplan {

namespace {

bool is_reserved(char c) {
  return c == '!' || c == '|' || c == '&' || c == '(' || c == ')';
}

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  Formula parse() {
    Formula f;
    f.clauses.push_back(clause());
    skip_space();
    while (!at_end()) {
      expect('&');
      f.clauses.push_back(clause());
      skip_space();
    }
    return f;
  }

 private:
  Clause clause() {
    skip_space();
    if (at_end()) throw ParseError("expected a clause", pos_);
    if (peek() == '(') {
      ++pos_;
      Clause c = disjunction();
      skip_space();
      expect(')');
      return c;
    }
    return disjunction();
  }

  Clause disjunction() {
    Clause c;
    c.push_back(literal());
    skip_space();
    while (!at_end() && peek() == '|') {
      ++pos_;
      c.push_back(literal());
      skip_space();
    }
    return c;
  }

  Literal literal() {
    skip_space();
    Literal lit;
    if (!at_end() && peek() == '!') {
      lit.negated = true;
      ++pos_;
      skip_space();
      if (!at_end() && peek() == '!') throw ParseError("nested negation is not allowed", pos_);
    }
    lit.symbol = symbol();
    return lit;
  }

  std::string symbol() {
    skip_space();
    const std::size_t start = pos_;
    while (!at_end() && !std::isspace(static_cast<unsigned char>(peek())) && !is_reserved(peek()))
      ++pos_;
    if (pos_ == start) {
      if (at_end()) throw ParseError("expected a symbol, found end of input", pos_);
      throw ParseError(std::string("expected a symbol, found '") + peek() + "'", pos_);
    }
    return text_.substr(start, pos_ - start);
  }

  void expect(char c) {
    skip_space();
    if (at_end()) throw ParseError(std::string("expected '") + c + "', found end of input", pos_);
    if (peek() != c)
      throw ParseError(std::string("expected '") + c + "', found '" + peek() + "'", pos_);
    ++pos_;
  }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula parse_formula(const std::string& text) {
  Parser parser(text);
  return parser.parse();
}

std::string print_formula(const Formula& f) {
  std::string out;
  for (std::size_t i = 0; i < f.clauses.size(); ++i) {
    if (i > 0) out += " & ";
    out += "(";
    for (std::size_t j = 0; j < f.clauses[i].size(); ++j) {
      if (j > 0) out += " | ";
      if (f.clauses[i][j].negated) out += "!";
      out += f.clauses[i][j].symbol;
    }
    out += ")";
  }
  return out;
}

bool evaluate(const Formula& f, const std::set<VertexId>& belief) {
  if (f.clauses.empty()) throw InputError("formula has no clauses");
  for (const auto& clause : f.clauses) {
    if (clause.empty()) throw InputError("formula has an empty clause");
    bool clause_value = false;
    for (const auto& lit : clause) {
      const bool member = belief.count(lit.symbol) != 0;
      if (member != lit.negated) {
        clause_value = true;
        break;
      }
    }
    if (!clause_value) return false;
  }
  return true;
}

std::vector<std::string> unknown_symbols(const Formula& f, const PGraph& world) {
  std::set<std::string> seen;
  std::vector<std::string> unknown;
  for (const auto& clause : f.clauses) {
    for (const auto& lit : clause) {
      if (world.has_vertex(lit.symbol)) continue;
      if (seen.insert(lit.symbol).second) unknown.push_back(lit.symbol);
    }
  }
  return unknown;
}

}  // namespace pgplan
