#include <algorithm>
#include <set>
#include <tuple>

#include "nullcause/facts/static_facts.hpp"

namespace nullcause::facts {

using logic::mk_atom;
using logic::mk_compound;
using logic::mk_int;
using logic::TermPtr;
using minil::AstNode;
using minil::CompilationUnit;
using minil::NodeKind;

namespace {

TermPtr line_term(const std::string& class_id, int line) {
  return mk_compound("line", {mk_atom(class_id), mk_int(line)});
}

TermPtr slot_term(const AstNode& n) {
  if (n.role_index >= 0)
    return logic::mk_tuple({mk_atom(n.role), mk_int(n.role_index)});
  return mk_atom(n.role);
}

const char* expr_kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::MethodInvoc: return "method_invoc";
    case NodeKind::BuiltinInvoc: return "builtin_invoc";
    case NodeKind::FieldAccess: return "field_access";
    case NodeKind::NewObject: return "new_object";
    case NodeKind::Literal: return "literal";
    case NodeKind::BinaryOp: return "binary_op";
    case NodeKind::UnaryOp: return "unary_op";
    default: return "expr";
  }
}

class Extractor {
 public:
  Extractor(const runtime::Program& p, const AtomTable& atoms,
            const CoverageMap& covered)
      : p_(p), atoms_(atoms), covered_(covered) {}

  FactBase run() {
    for (std::size_t i = 0; i < p_.units.size(); ++i) walk_unit(static_cast<int>(i));
    shape_facts();

    std::sort(keyed_.begin(), keyed_.end(), [](const Keyed& a, const Keyed& b) {
      return std::tie(a.pred, a.cls, a.offset, a.text) <
             std::tie(b.pred, b.cls, b.offset, b.text);
    });
    FactBase out;
    std::set<std::string> seen;
    for (const Keyed& k : keyed_) {
      if (!seen.insert(k.text).second) continue;
      out.facts.push_back(k.term);
    }
    return out;
  }

 private:
  struct Keyed {
    std::string pred, cls, text;
    long long offset;
    TermPtr term;
  };

  const CompilationUnit& unit(int i) const { return p_.unit(i); }

  bool covered(const CompilationUnit& u, const AstNode& n) const {
    auto it = covered_.find(u.class_id);
    return it != covered_.end() && it->second.count(n.range.start_line) > 0;
  }

  void add(const std::string& cls, long long offset, const TermPtr& t) {
    keyed_.push_back(Keyed{t->text, cls, logic::to_string(t), offset, t});
  }

  std::string atom(int ui, int node) const { return atoms_.atom(ui, node); }

  // Innermost enclosing expression that owns an atom, or "none".
  std::string enclosing_expr_atom(int ui, int node) const {
    const CompilationUnit& u = unit(ui);
    int cur = u.node(node).parent;
    while (cur >= 0 && minil::is_expression(u.node(cur).kind)) {
      std::string a = atom(ui, cur);
      if (!a.empty()) return a;
      cur = u.node(cur).parent;
    }
    return "none";
  }

  void walk_unit(int ui) {
    const CompilationUnit& u = unit(ui);
    for (const AstNode& n : u.nodes) {
      if (!covered(u, n)) continue;
      TermPtr line = line_term(u.class_id, n.range.start_line);
      long long off = n.range.start;

      switch (n.kind) {
        case NodeKind::MethodInvoc:
        case NodeKind::BuiltinInvoc:
          emit_invocation(ui, n, line, off);
          break;
        case NodeKind::NewObject:
          emit_ctor_inits(ui, n, line, off);
          break;
        case NodeKind::VarDecl: {
          std::string src = atom(ui, n.children[0]);
          std::string dst = atom(ui, n.id);
          if (!src.empty() && !dst.empty())
            add(u.class_id, off,
                mk_compound("assign", {mk_atom(dst), mk_atom(src), line}));
          break;
        }
        case NodeKind::Assign: {
          std::string dst = atom(ui, n.children[0]);
          std::string src = atom(ui, n.children[1]);
          if (!src.empty() && !dst.empty())
            add(u.class_id, off,
                mk_compound("assign", {mk_atom(dst), mk_atom(src), line}));
          break;
        }
        case NodeKind::Return: {
          if (n.children.empty()) break;
          std::string value = atom(ui, n.children[0]);
          std::string m = atom(ui, enclosing_method(u, n.id));
          if (!value.empty() && !m.empty())
            add(u.class_id, off,
                mk_compound("return", {mk_atom(value), mk_atom(m), line}));
          break;
        }
        case NodeKind::SimpleName: {
          if (!is_read_position(u, n)) break;
          std::string v = atom(ui, n.id);
          if (v.empty()) break;
          add(u.class_id, off,
              mk_compound("ref", {mk_atom(v),
                                  mk_atom(enclosing_expr_atom(ui, n.id)),
                                  line}));
          break;
        }
        case NodeKind::FieldAccess: {
          if (!is_read_position(u, n)) break;
          std::string f = atom(ui, n.id);
          if (f.empty()) break;
          add(u.class_id, off,
              mk_compound("ref", {mk_atom(f),
                                  mk_atom(enclosing_expr_atom(ui, n.id)),
                                  line}));
          break;
        }
        case NodeKind::Literal:
          if (n.lit_kind == minil::LitKind::Null) {
            std::string e = atom(ui, n.id);
            if (!e.empty())
              add(u.class_id, off,
                  mk_compound("literal",
                              {mk_atom(e), mk_atom("null"), line}));
          }
          break;
        default:
          break;
      }

      emit_code_fact(ui, n, off);
    }
  }

  void emit_invocation(int ui, const AstNode& n, const TermPtr& line,
                       long long off) {
    const CompilationUnit& u = unit(ui);
    std::string inv = atom(ui, n.id);
    if (inv.empty()) return;

    std::string target;
    if (n.kind == NodeKind::BuiltinInvoc) {
      auto it = atoms_.builtin_atom.find(n.text);
      if (it != atoms_.builtin_atom.end()) target = it->second;
    } else {
      const runtime::Program::MethodRef* callee =
          p_.call_target(ui, n.id);
      target = atom(callee->unit, callee->method);
    }
    if (target.empty()) return;
    add(u.class_id, off,
        mk_compound("method_invoc",
                    {mk_atom(inv), mk_atom(target), line}));

    int index = 0;
    for (int c : n.children) {
      const AstNode& child = u.node(c);
      if (child.role == "receiver") {
        std::string recv = atom(ui, c);
        if (!recv.empty())
          add(u.class_id, off,
              mk_compound("receiver",
                          {mk_atom(recv), mk_atom(inv), line}));
        continue;
      }
      ++index;
      std::string arg = atom(ui, c);
      if (!arg.empty())
        add(u.class_id, off,
            mk_compound("argument",
                        {mk_atom(arg), mk_int(index), mk_atom(inv)}));
    }
  }

  // new C(a, b) assigns C's leading fields; record those copies.
  void emit_ctor_inits(int ui, const AstNode& n, const TermPtr& line,
                       long long off) {
    const runtime::Program::ClassRef* cls = p_.ctor_target(ui, n.id);
    std::vector<int> fields = p_.fields_of(*cls);
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      std::string dst = atom(cls->unit, fields[i]);
      std::string src = atom(ui, n.children[i]);
      if (!dst.empty() && !src.empty())
        add(unit(ui).class_id, off,
            mk_compound("assign", {mk_atom(dst), mk_atom(src), line}));
    }
  }

  // expr/6 and name/6 describe the shape of covered code.
  void emit_code_fact(int ui, const AstNode& n, long long off) {
    const CompilationUnit& u = unit(ui);
    std::string a = atom(ui, n.id);
    if (a.empty()) return;
    TermPtr cls = mk_atom(u.class_id);
    TermPtr lnum = mk_int(n.range.start_line);
    if (n.kind == NodeKind::SimpleName) {
      const AstNode& decl = u.node(n.decl);
      const char* kind = decl.kind == NodeKind::Param   ? "param"
                         : decl.kind == NodeKind::FieldDecl ? "field"
                                                            : "var";
      add(u.class_id, off,
          mk_compound("name", {mk_atom(a), mk_atom(n.text), mk_atom(kind),
                               slot_term(n), cls, lnum}));
    } else if (minil::is_expression(n.kind) && n.kind != NodeKind::This) {
      add(u.class_id, off,
          mk_compound("expr",
                      {mk_atom(a), mk_atom(expr_kind_name(n.kind)),
                       mk_atom(enclosing_expr_atom(ui, n.id)), slot_term(n),
                       cls, lnum}));
    }
  }

  // Per-class and per-method facts, independent of coverage.
  void shape_facts() {
    for (std::size_t i = 0; i < p_.units.size(); ++i) {
      int ui = static_cast<int>(i);
      const CompilationUnit& u = unit(ui);
      for (int cls : u.classes) {
        const AstNode& c = u.node(cls);
        add(u.class_id, c.range.start,
            mk_compound("class", {mk_atom(u.class_id), mk_atom(c.text)}));
        std::string c_atom = atom(ui, cls);

        for (int mem : c.children) {
          const AstNode& m = u.node(mem);
          if (m.kind == NodeKind::FieldDecl) {
            std::string f = atom(ui, mem);
            if (!f.empty() && !c_atom.empty())
              add(u.class_id, m.range.start,
                  mk_compound("field_of", {mk_atom(f), mk_atom(c_atom)}));
            continue;
          }
          std::string m_atom = atom(ui, mem);
          if (m_atom.empty()) continue;
          add(u.class_id, m.range.start,
              mk_compound("method_of",
                          {mk_atom(m_atom), mk_atom(c_atom)}));
          add(u.class_id, m.range.start,
              mk_compound("method_range",
                          {mk_atom(m_atom), mk_atom(u.class_id),
                           mk_int(m.range.start_line),
                           mk_int(m.range.end_line)}));
          if (m.is_test)
            add(u.class_id, m.range.start,
                mk_compound("test_method", {mk_atom(m_atom)}));
          if (is_single_stmt_return_call(u, m))
            add(u.class_id, m.range.start,
                mk_compound("single_stmt_return_call", {mk_atom(m_atom)}));
          emit_params(ui, m);
        }
      }
    }
    for (const auto& [name, m_atom] : atoms_.builtin_atom)
      add("", 0, mk_compound("builtin", {mk_atom(m_atom)}));
  }

  void emit_params(int ui, const AstNode& m) {
    const CompilationUnit& u = unit(ui);
    std::string m_atom = atom(ui, m.id);
    for (int c : m.children) {
      const AstNode& param = u.node(c);
      if (param.kind != NodeKind::Param) continue;
      std::string p_atom = atom(ui, c);
      if (p_atom.empty()) continue;  // method never reached
      add(u.class_id, param.range.start,
          mk_compound("param", {mk_atom(p_atom),
                                mk_int(param.role_index + 1),
                                mk_atom(m_atom)}));
      add(u.class_id, param.range.start,
          mk_compound("param_line",
                      {mk_atom(p_atom),
                       line_term(u.class_id, param.range.start_line)}));
    }
  }

  // A body consisting solely of `return <call>;` — a pass-through wrapper.
  bool is_single_stmt_return_call(const CompilationUnit& u,
                                  const AstNode& m) const {
    int body = -1;
    for (int c : m.children)
      if (u.node(c).kind == NodeKind::Block) body = c;
    if (body < 0 || u.node(body).children.size() != 1) return false;
    const AstNode& stmt = u.node(u.node(body).children[0]);
    if (stmt.kind != NodeKind::Return || stmt.children.empty()) return false;
    NodeKind vk = u.node(stmt.children[0]).kind;
    return vk == NodeKind::MethodInvoc || vk == NodeKind::BuiltinInvoc;
  }

  const runtime::Program& p_;
  const AtomTable& atoms_;
  const CoverageMap& covered_;
  std::vector<Keyed> keyed_;
};

}  // namespace

std::string FactBase::to_text() const {
  std::string out;
  for (const TermPtr& f : facts) {
    out += logic::to_string(f);
    out += ".\n";
  }
  return out;
}

FactBase static_facts(const runtime::Program& program, const AtomTable& atoms,
                      const CoverageMap& covered) {
  return Extractor(program, atoms, covered).run();
}

}  // namespace nullcause::facts
