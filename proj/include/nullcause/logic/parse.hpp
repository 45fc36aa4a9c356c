#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "nullcause/logic/kb.hpp"
#include "nullcause/logic/term.hpp"

namespace nullcause::logic {

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, int line, int col);
  int line;
  int col;
};

// Parses clause text: facts and rules terminated by '.', '%' line comments.
// Body operators: ',' (and), ';' (or), '\+' (negation as failure), '!' (cut),
// '=', '==', '\==', '=<', '<'. Disjunctions are desugared at parse time into
// one clause per disjunct (distributing surrounding conjuncts), in
// left-to-right order; a cut inside a disjunct is rejected because the
// desugaring cannot preserve its scope.
std::vector<Clause> parse_clauses(const std::string& text);

// A goal with its variables numbered 0..num_vars-1 in first-occurrence
// order. var_names lists the named (non-'_') variables for rendering.
struct Query {
  TermPtr goal;
  int num_vars = 0;
  std::vector<std::string> var_names;  // index == variable id for named vars
};

// Parses a single goal term, e.g. "father(X, Y)". A trailing '.' is allowed.
Query parse_query(const std::string& text);

// Inverse of parse_clauses for one clause: "head." or "head :- g1, g2.".
std::string serialize_clause(const Clause& c);

}  // namespace nullcause::logic
