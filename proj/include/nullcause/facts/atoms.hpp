#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>

#include "nullcause/runtime/program.hpp"

namespace nullcause::facts {

// Lines touched during execution, per compilation unit.
using CoverageMap = std::map<std::string, std::set<int>>;

// Stable names for the program entities that facts talk about:
//   expr<k>          covered expressions (calls, literals, operators, ...)
//   v_<name>_<k>     local variables       p_<name>_<k>  parameters
//   f_<name>_<k>     fields                m_<name>_<k>  methods (and builtins)
//   c_<name>_<k>     classes               t_<name>_<k>  test ids (k as m_)
// Numbering is deterministic: units sorted by class id, nodes in pre-order.
// Simple names share their declaration's atom; field accesses share the
// field's atom (receiver-insensitive). `this` and unresolvable field names
// get no atom.
struct AtomTable {
  // (unit index, node id) -> atom, for declarations and expressions alike.
  std::map<std::pair<int, int>, std::string> node_atom;
  // (unit index, MethodDecl id) -> t_ atom, for test methods.
  std::map<std::pair<int, int>, std::string> test_atom;
  // builtin name -> its synthetic method atom (e.g. len -> m_len_1).
  std::map<std::string, std::string> builtin_atom;
  // atom -> owning (unit index, node id); builtin atoms map to (-1, -1).
  std::map<std::string, std::pair<int, int>> owner;
  // field name -> its unique declaration, for receiver-insensitive routing.
  std::map<std::string, std::pair<int, int>> unique_field;

  std::string atom(int unit, int node) const {
    auto it = node_atom.find({unit, node});
    return it == node_atom.end() ? std::string() : it->second;
  }
  std::string test(int unit, int method) const {
    auto it = test_atom.find({unit, method});
    return it == test_atom.end() ? std::string() : it->second;
  }
};

AtomTable assign_atoms(const runtime::Program& program,
                       const CoverageMap& covered);

// ---- shared AST position helpers -----------------------------------------

bool is_statement(minil::NodeKind k);

// Innermost statement containing `node` (the node itself if a statement).
int enclosing_statement(const minil::CompilationUnit& unit, int node);

// MethodDecl containing `node`, -1 outside methods.
int enclosing_method(const minil::CompilationUnit& unit, int node);

// True for a SimpleName or FieldAccess occurrence that reads its target
// (i.e. is not the left-hand side of an assignment).
bool is_read_position(const minil::CompilationUnit& unit,
                      const minil::AstNode& n);

}  // namespace nullcause::facts
