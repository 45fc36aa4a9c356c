#include "nullcause/minil/ast.hpp"

namespace nullcause::minil {

const char* kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::Unit: return "Unit";
    case NodeKind::ClassDecl: return "ClassDecl";
    case NodeKind::FieldDecl: return "FieldDecl";
    case NodeKind::MethodDecl: return "MethodDecl";
    case NodeKind::Param: return "Param";
    case NodeKind::Block: return "Block";
    case NodeKind::VarDecl: return "VarDecl";
    case NodeKind::Assign: return "Assign";
    case NodeKind::Return: return "Return";
    case NodeKind::If: return "If";
    case NodeKind::While: return "While";
    case NodeKind::ExprStmt: return "ExprStmt";
    case NodeKind::Assert: return "Assert";
    case NodeKind::MethodInvoc: return "MethodInvoc";
    case NodeKind::BuiltinInvoc: return "BuiltinInvoc";
    case NodeKind::FieldAccess: return "FieldAccess";
    case NodeKind::NewObject: return "NewObject";
    case NodeKind::SimpleName: return "SimpleName";
    case NodeKind::This: return "This";
    case NodeKind::Literal: return "Literal";
    case NodeKind::BinaryOp: return "BinaryOp";
    case NodeKind::UnaryOp: return "UnaryOp";
  }
  return "?";
}

bool is_expression(NodeKind k) {
  switch (k) {
    case NodeKind::MethodInvoc:
    case NodeKind::BuiltinInvoc:
    case NodeKind::FieldAccess:
    case NodeKind::NewObject:
    case NodeKind::SimpleName:
    case NodeKind::This:
    case NodeKind::Literal:
    case NodeKind::BinaryOp:
    case NodeKind::UnaryOp:
      return true;
    default:
      return false;
  }
}

const AstNode& node_at(const CompilationUnit& unit, int start, int length) {
  const AstNode* best = nullptr;
  for (const auto& n : unit.nodes) {
    if (n.range.start > start ||
        n.range.start + n.range.length < start + length)
      continue;
    if (!best) {
      best = &n;
      continue;
    }
    if (n.range.length != best->range.length) {
      if (n.range.length < best->range.length) best = &n;
      continue;
    }
    if (n.range.start != best->range.start) {
      if (n.range.start < best->range.start) best = &n;
      continue;
    }
    if (n.id > best->id) best = &n;  // equal range: prefer the deeper node
  }
  if (!best)
    throw NotFound("no node covers [" + std::to_string(start) + ", " +
                   std::to_string(start + length) + ") in " + unit.class_id);
  return *best;
}

}  // namespace nullcause::minil
