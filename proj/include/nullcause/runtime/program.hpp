#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "nullcause/minil/ast.hpp"

namespace nullcause::runtime {

// A linked Minil program: compilation units sorted by class id, with every
// cross-unit reference (dotted calls, constructors) resolved to its target.
// Linking validates what can be checked statically — arities, constructor
// argument counts, uniqueness of dotted-call names — and throws
// minil::NameError on violations.
struct Program {
  struct ClassRef {
    int unit = -1;  // index into units
    int node = -1;  // ClassDecl id within that unit
  };
  struct MethodRef {
    int unit = -1;
    int cls = -1;     // ClassDecl id
    int method = -1;  // MethodDecl id
  };

  std::vector<minil::CompilationUnit> units;

  // Class name -> declaration; class names are program-unique.
  std::map<std::string, ClassRef> classes;

  // (unit, MethodInvoc node) -> callee; (unit, NewObject node) -> class.
  std::map<std::pair<int, int>, MethodRef> call_targets;
  std::map<std::pair<int, int>, ClassRef> ctor_targets;

  // Test methods in execution order: units by class id, then declaration
  // order within each unit.
  std::vector<MethodRef> tests;

  const minil::CompilationUnit& unit(int i) const {
    return units[static_cast<std::size_t>(i)];
  }
  int unit_index(const std::string& class_id) const;

  const MethodRef* call_target(int unit, int node) const;
  const ClassRef* ctor_target(int unit, int node) const;

  // Param node ids / body Block id of a MethodDecl.
  std::vector<int> params_of(const MethodRef& m) const;
  int body_of(const MethodRef& m) const;
  // FieldDecl ids of a class, in declaration order.
  std::vector<int> fields_of(const ClassRef& c) const;

  std::string class_name(const MethodRef& m) const {
    return unit(m.unit).node(m.cls).text;
  }
  std::string method_name(const MethodRef& m) const {
    return unit(m.unit).node(m.method).text;
  }
};

// Links parsed units into a program. The unit list may arrive in any order.
Program link(std::vector<minil::CompilationUnit> units);

}  // namespace nullcause::runtime
