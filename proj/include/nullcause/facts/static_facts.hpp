#pragma once

#include <string>
#include <vector>

#include "nullcause/facts/atoms.hpp"
#include "nullcause/logic/term.hpp"

namespace nullcause::facts {

struct FactBase {
  std::vector<logic::TermPtr> facts;

  // One fact per line, terminated by periods; parses back with the logic
  // parser.
  std::string to_text() const;
};

// Extracts the code-description facts for everything on covered lines:
// calls, arguments, receivers, assignments, returns, parameters, name
// references, null literals, plus per-method and per-class shape facts.
// Deterministic: facts are sorted by (predicate, unit, source offset) and
// deduplicated.
FactBase static_facts(const runtime::Program& program, const AtomTable& atoms,
                      const CoverageMap& covered);

}  // namespace nullcause::facts
