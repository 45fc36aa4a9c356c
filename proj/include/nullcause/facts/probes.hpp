#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "nullcause/facts/atoms.hpp"

namespace nullcause::facts {

// One injected probe variable: `var <atom>_line_<L> = <expr>;` placed at the
// start of the statement containing the monitored expression.
struct ProbeInfo {
  std::string atom;           // entity the probe observes (v_/p_/f_/expr<k>)
  std::string class_id;
  int line = 0;
  std::string original_text;  // the expression as written in the source
};

struct ProbedProgram {
  // class id -> full source text, probed where breakpoints demanded it.
  // Every unit of the program appears, modified or not.
  std::map<std::string, std::string> sources;
  // probe variable name -> what it monitors.
  std::map<std::string, ProbeInfo> probes;
  // Monitorable occurrences that had to be skipped, with reasons.
  std::vector<std::string> notes;
};

// Rewrites the program so that every monitorable expression on a breakpoint
// line is captured in a fresh probe variable before its statement runs.
// Monitorable: a read of a variable, parameter, or field, or a call result.
// Literals, constructors, operators and `this` are not monitored; neither is
// anything whose evaluation is conditional within its statement (while
// conditions, else-if conditions, short-circuit right operands).
//
// Probes preserve behaviour: they evaluate the same subexpressions in the
// same order the statement would, and the original occurrences are replaced
// by reads of the probe variables.
ProbedProgram inject_probes(const runtime::Program& program,
                            const AtomTable& atoms,
                            const CoverageMap& breakpoints);

}  // namespace nullcause::facts
