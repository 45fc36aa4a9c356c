#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nullcause::minil {

struct SourceRange {
  std::string class_id;
  int start = 0;       // byte offset, 0-based
  int length = 0;
  int start_line = 1;  // 1-based
  int end_line = 1;
};

enum class NodeKind {
  Unit,
  ClassDecl,
  FieldDecl,
  MethodDecl,
  Param,
  Block,
  VarDecl,
  Assign,
  Return,
  If,
  While,
  ExprStmt,
  Assert,
  MethodInvoc,
  BuiltinInvoc,
  FieldAccess,
  NewObject,
  SimpleName,
  This,
  Literal,
  BinaryOp,
  UnaryOp,
};

const char* kind_name(NodeKind k);
bool is_expression(NodeKind k);

enum class LitKind { Null, Int, Bool, Str };

// One AST node in a compilation unit's arena. After parsing, node ids equal
// arena indices and follow a pre-order traversal of the unit.
struct AstNode {
  NodeKind kind;
  int id = -1;
  int parent = -1;  // -1 only for the Unit root
  // Structural slot within the parent: role name plus index for indexed
  // roles (args, stmts, ...), or -1 for scalar roles (cond, lhs, ...).
  std::string role;
  int role_index = -1;
  SourceRange range;
  std::vector<int> children;  // in syntactic order

  // Identifier payload: name of a declaration, called method, accessed
  // field, instantiated class; operator spelling for BinaryOp/UnaryOp.
  std::string text;

  // Literal payload.
  LitKind lit_kind = LitKind::Null;
  long long int_value = 0;
  bool bool_value = false;
  std::string str_value;

  bool is_test = false;  // MethodDecl

  // SimpleName: node id of the VarDecl/Param/FieldDecl it denotes
  // (intra-unit, filled during parse). MethodInvoc/NewObject targets live in
  // the program-level link table, since they may cross units.
  int decl = -1;

  // True for every expression inside a while-condition, an else-if
  // condition, or the right operand of '&&'/'||': such values cannot be
  // hoisted to a probe that runs unconditionally before the statement.
  bool non_hoistable = false;
};

struct CompilationUnit {
  std::string class_id;
  std::string qualified_name;  // class_id unless the host names it otherwise
  std::string source;
  std::vector<AstNode> nodes;  // nodes[i].id == i; nodes[0] is the Unit root
  std::vector<int> classes;    // ClassDecl ids in declaration order

  const AstNode& node(int id) const { return nodes[static_cast<std::size_t>(id)]; }
  std::string text_of(const AstNode& n) const {
    return source.substr(static_cast<std::size_t>(n.range.start),
                         static_cast<std::size_t>(n.range.length));
  }
};

struct NotFound : std::runtime_error {
  explicit NotFound(const std::string& msg) : std::runtime_error(msg) {}
};

// Innermost node whose range equals or contains [start, start+length);
// ties broken by smaller length, then smaller start offset, then greater
// depth. Throws NotFound when nothing covers the range.
const AstNode& node_at(const CompilationUnit& unit, int start, int length);

}  // namespace nullcause::minil
