#pragma once

#include <stdexcept>
#include <string>

#include "nullcause/minil/ast.hpp"

namespace nullcause::minil {

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, int line, int col);
  int line;
  int col;
};

// An identifier that does not denote exactly one visible declaration.
struct NameError : std::runtime_error {
  NameError(const std::string& msg, int line, int col);
  int line;
  int col;
};

// Parses one Minil source file (grammar in docs/minil.md) and resolves
// simple names against locals, parameters, and fields. Node ids are assigned
// in pre-order, deterministically. Method-call and constructor targets are
// resolved later at program link time, since they may live in other units.
CompilationUnit parse(const std::string& source, const std::string& class_id);

// Canonical form: 2-space indentation, one statement per line, minimal
// parentheses. parse(print(u)) is structurally identical to u.
std::string print(const CompilationUnit& unit);

}  // namespace nullcause::minil
