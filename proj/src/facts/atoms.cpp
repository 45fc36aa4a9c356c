#include "nullcause/facts/atoms.hpp"

namespace nullcause::facts {

using minil::AstNode;
using minil::CompilationUnit;
using minil::NodeKind;

bool is_statement(minil::NodeKind k) {
  switch (k) {
    case NodeKind::VarDecl:
    case NodeKind::Assign:
    case NodeKind::Return:
    case NodeKind::If:
    case NodeKind::While:
    case NodeKind::ExprStmt:
    case NodeKind::Assert:
      return true;
    default:
      return false;
  }
}

int enclosing_statement(const CompilationUnit& unit, int node) {
  int cur = node;
  while (cur >= 0 && !is_statement(unit.node(cur).kind))
    cur = unit.node(cur).parent;
  return cur;
}

int enclosing_method(const CompilationUnit& unit, int node) {
  int cur = node;
  while (cur >= 0 && unit.node(cur).kind != NodeKind::MethodDecl)
    cur = unit.node(cur).parent;
  return cur;
}

bool is_read_position(const CompilationUnit& unit, const AstNode& n) {
  return !(n.role == "lhs" && n.parent >= 0 &&
           unit.node(n.parent).kind == NodeKind::Assign);
}

namespace {

bool covered_node(const CoverageMap& covered, const CompilationUnit& u,
                  const AstNode& n) {
  auto it = covered.find(u.class_id);
  return it != covered.end() && it->second.count(n.range.start_line) > 0;
}

// Expressions that receive their own expr<k> atom. Names and field accesses
// route to declaration atoms instead; `this` cannot be null and gets none.
bool owns_expr_atom(NodeKind k) {
  switch (k) {
    case NodeKind::MethodInvoc:
    case NodeKind::BuiltinInvoc:
    case NodeKind::NewObject:
    case NodeKind::Literal:
    case NodeKind::BinaryOp:
    case NodeKind::UnaryOp:
      return true;
    default:
      return false;
  }
}

class Assigner {
 public:
  Assigner(const runtime::Program& p, const CoverageMap& covered)
      : p_(p), covered_(covered) {}

  AtomTable run() {
    index_fields();
    mark();
    assign();
    return std::move(table_);
  }

 private:
  const CompilationUnit& unit(int i) const { return p_.unit(i); }

  void index_fields() {
    std::map<std::string, int> counts;
    for (std::size_t ui = 0; ui < p_.units.size(); ++ui)
      for (const AstNode& n : unit(static_cast<int>(ui)).nodes)
        if (n.kind == NodeKind::FieldDecl) {
          ++counts[n.text];
          table_.unique_field[n.text] = {static_cast<int>(ui), n.id};
        }
    for (const auto& [name, count] : counts)
      if (count > 1) table_.unique_field.erase(name);
  }

  void need(int ui, int node) { needed_.insert({ui, node}); }

  // The FieldDecl a field occurrence denotes, if program-unique.
  std::pair<int, int> field_target(const std::string& name) const {
    auto it = table_.unique_field.find(name);
    return it == table_.unique_field.end() ? std::pair<int, int>{-1, -1}
                                           : it->second;
  }

  void mark() {
    for (std::size_t i = 0; i < p_.units.size(); ++i) {
      int ui = static_cast<int>(i);
      const CompilationUnit& u = unit(ui);
      auto cov = covered_.find(u.class_id);
      const std::set<int>* lines =
          cov == covered_.end() ? nullptr : &cov->second;

      for (const AstNode& n : u.nodes) {
        // Declarations visible to facts regardless of coverage.
        if (n.kind == NodeKind::ClassDecl || n.kind == NodeKind::MethodDecl)
          need(ui, n.id);
        if (n.kind == NodeKind::Param && lines) {
          const AstNode& m = u.node(enclosing_method(u, n.id));
          for (int l = m.range.start_line; l <= m.range.end_line; ++l)
            if (lines->count(l)) {
              need(ui, n.id);
              break;
            }
        }
        if (!lines || !lines->count(n.range.start_line)) continue;

        // Covered code pulls in what it references.
        if (n.kind == NodeKind::VarDecl) need(ui, n.id);
        if (n.kind == NodeKind::SimpleName) need(ui, n.decl);
        if (n.kind == NodeKind::FieldAccess) {
          auto f = field_target(n.text);
          if (f.first >= 0) need(f.first, f.second);
        }
        if (n.kind == NodeKind::BuiltinInvoc) used_builtins_.insert(n.text);
        if (n.kind == NodeKind::NewObject) {
          const runtime::Program::ClassRef* cls = p_.ctor_target(ui, n.id);
          std::vector<int> fields = p_.fields_of(*cls);
          for (std::size_t a = 0; a < n.children.size(); ++a)
            need(cls->unit, fields[a]);
        }
      }
    }
  }

  std::string fresh(const std::string& prefix, const std::string& name) {
    int k = ++per_name_[prefix + name];
    return prefix + name + "_" + std::to_string(k);
  }

  void put(int ui, int node, const std::string& atom) {
    table_.node_atom[{ui, node}] = atom;
    table_.owner[atom] = {ui, node};
  }

  void assign() {
    int expr_counter = 0;
    for (std::size_t i = 0; i < p_.units.size(); ++i) {
      int ui = static_cast<int>(i);
      const CompilationUnit& u = unit(ui);
      for (const AstNode& n : u.nodes) {
        bool is_needed = needed_.count({ui, n.id}) > 0;
        switch (n.kind) {
          case NodeKind::ClassDecl:
            if (is_needed) put(ui, n.id, fresh("c_", n.text));
            break;
          case NodeKind::MethodDecl:
            if (is_needed) {
              std::string atom = fresh("m_", n.text);
              put(ui, n.id, atom);
              if (n.is_test) {
                // t_ shares the method atom's number.
                std::string t = "t_" + atom.substr(2);
                table_.test_atom[{ui, n.id}] = t;
                table_.owner[t] = {ui, n.id};
              }
            }
            break;
          case NodeKind::FieldDecl:
            if (is_needed) put(ui, n.id, fresh("f_", n.text));
            break;
          case NodeKind::Param:
            if (is_needed) put(ui, n.id, fresh("p_", n.text));
            break;
          case NodeKind::VarDecl:
            if (is_needed) put(ui, n.id, fresh("v_", n.text));
            break;
          default:
            if (owns_expr_atom(n.kind) && covered_node(covered_, u, n)) {
              std::string atom = "expr" + std::to_string(++expr_counter);
              put(ui, n.id, atom);
            }
            break;
        }
      }
    }

    // Covered occurrences share their declaration's atom.
    for (std::size_t i = 0; i < p_.units.size(); ++i) {
      int ui = static_cast<int>(i);
      const CompilationUnit& u = unit(ui);
      for (const AstNode& n : u.nodes) {
        if (!covered_node(covered_, u, n)) continue;
        if (n.kind == NodeKind::SimpleName) {
          std::string atom = table_.atom(ui, n.decl);
          if (!atom.empty()) table_.node_atom[{ui, n.id}] = atom;
        } else if (n.kind == NodeKind::FieldAccess) {
          auto f = field_target(n.text);
          if (f.first >= 0) {
            std::string atom = table_.atom(f.first, f.second);
            if (!atom.empty()) table_.node_atom[{ui, n.id}] = atom;
          }
        }
      }
    }

    for (const std::string& b : used_builtins_) {
      std::string atom = fresh("m_", b);
      table_.builtin_atom[b] = atom;
      table_.owner[atom] = {-1, -1};
    }
  }

  const runtime::Program& p_;
  const CoverageMap& covered_;
  AtomTable table_;
  std::set<std::pair<int, int>> needed_;
  std::set<std::string> used_builtins_;
  std::map<std::string, int> per_name_;
};

}  // namespace

AtomTable assign_atoms(const runtime::Program& program,
                       const CoverageMap& covered) {
  return Assigner(program, covered).run();
}

}  // namespace nullcause::facts
