#pragma once

#include "nullcause/minil/ast.hpp"

namespace nullcause::minil::detail {

// Resolves simple names, enforces declaration rules, marks non-hoistable
// subtrees. Runs on the freshly parsed, already renumbered arena.
void resolve_unit(CompilationUnit& unit);

// 1-based column of a byte offset, for error messages.
int column_of(const std::string& source, int offset);

}  // namespace nullcause::minil::detail
