#pragma once

#include <string>
#include <vector>

#include "nullcause/facts/probes.hpp"
#include "nullcause/facts/static_facts.hpp"
#include "nullcause/runtime/interp.hpp"

namespace nullcause::facts {

struct DynamicFacts {
  FactBase facts;
  std::vector<std::string> notes;
};

// Turns the outcomes of the probed run into facts:
//   val(E, null, line(C, L))        a probe saw E evaluate to null
//   npe_error(T, E, line(C, L), K)  test T failed with a null error of kind
//                                   K (deref / operator / builtin_arg)
//                                   blaming E
//   stack(T, I, M, line(C, L))      I-th frame (innermost first) of T's
//                                   failure
//   failed_test(T)                  any non-passing test
// The blamed expression arrives as source text; it is decoded to an entity
// atom through the probe table, or failing that by locating a uniquely-named
// node on the error line. Undecodable errors are dropped with a note.
DynamicFacts dynamic_facts(const runtime::Program& program,
                           const AtomTable& atoms,
                           const ProbedProgram& probed,
                           const std::vector<runtime::TestOutcome>& outcomes);

}  // namespace nullcause::facts
