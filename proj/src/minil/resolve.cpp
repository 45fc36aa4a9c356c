#include <map>
#include <vector>

#include "internal.hpp"
#include "nullcause/minil/parse.hpp"

namespace nullcause::minil::detail {

namespace {

class Resolver {
 public:
  explicit Resolver(CompilationUnit& unit) : unit_(unit) {}

  void run() {
    std::map<std::string, int> class_names;
    for (int cls : unit_.classes) {
      const AstNode& c = unit_.node(cls);
      if (!class_names.emplace(c.text, cls).second)
        err("duplicate class '" + c.text + "'", c);
    }
    for (int cls : unit_.classes) resolve_class(cls);
  }

 private:
  AstNode& node(int id) { return unit_.nodes[static_cast<std::size_t>(id)]; }

  [[noreturn]] void err(const std::string& msg, const AstNode& at) {
    throw NameError(msg, at.range.start_line,
                    column_of(unit_.source, at.range.start));
  }

  void resolve_class(int cls) {
    fields_.clear();
    std::map<std::string, int> methods;
    for (int child : node(cls).children) {
      AstNode& m = node(child);
      if (m.kind == NodeKind::FieldDecl) {
        if (!fields_.emplace(m.text, child).second)
          err("duplicate field '" + m.text + "'", m);
      } else if (m.kind == NodeKind::MethodDecl) {
        if (!methods.emplace(m.text, child).second)
          err("duplicate method '" + m.text + "'", m);
        if (m.text == "len" || m.text == "concat" || m.text == "parse_int")
          err("method name '" + m.text + "' is reserved for a builtin", m);
      }
    }
    for (int child : node(cls).children) {
      if (node(child).kind != NodeKind::MethodDecl) continue;
      resolve_method(child);
    }
  }

  void resolve_method(int m) {
    scopes_.clear();
    scopes_.emplace_back();
    int body = -1;
    int params = 0;
    for (int child : node(m).children) {
      AstNode& c = node(child);
      if (c.kind == NodeKind::Param) {
        ++params;
        if (scopes_.back().count(c.text))
          err("duplicate parameter '" + c.text + "'", c);
        scopes_.back()[c.text] = child;
      } else if (c.kind == NodeKind::Block) {
        body = child;
      }
    }
    if (node(m).is_test && params > 0)
      err("test method '" + node(m).text + "' must take no parameters",
          node(m));
    if (body >= 0) resolve_block(body);
  }

  void resolve_block(int b) {
    scopes_.emplace_back();
    for (int s : node(b).children) resolve_stmt(s);
    scopes_.pop_back();
  }

  void resolve_stmt(int id) {
    AstNode& n = node(id);
    switch (n.kind) {
      case NodeKind::VarDecl: {
        for (int c : n.children) resolve_expr(c);  // init before registering
        for (const auto& scope : scopes_)
          if (scope.count(n.text))
            err("'" + n.text + "' is already declared in this method", n);
        scopes_.back()[n.text] = id;
        return;
      }
      case NodeKind::Assign:
      case NodeKind::Return:
      case NodeKind::ExprStmt:
      case NodeKind::Assert:
        for (int c : n.children) resolve_expr(c);
        return;
      case NodeKind::If: {
        for (int c : n.children) {
          const AstNode& ch = node(c);
          if (ch.role == "cond") {
            resolve_expr(c);
          } else if (ch.kind == NodeKind::Block) {
            resolve_block(c);
          } else {
            // else-if chain: its condition only evaluates when the branch
            // is reached, so nothing in it may be hoisted to the statement.
            resolve_stmt(c);
            for (int g : node(c).children)
              if (node(g).role == "cond") mark_non_hoistable(g);
          }
        }
        return;
      }
      case NodeKind::While: {
        for (int c : n.children) {
          if (node(c).role == "cond") {
            resolve_expr(c);
            mark_non_hoistable(c);
          } else {
            resolve_block(c);
          }
        }
        return;
      }
      default:
        err("unexpected statement", n);
    }
  }

  void resolve_expr(int id) {
    AstNode& n = node(id);
    if (n.kind == NodeKind::SimpleName) {
      for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
        auto hit = it->find(n.text);
        if (hit != it->end()) {
          n.decl = hit->second;
          return;
        }
      }
      auto f = fields_.find(n.text);
      if (f != fields_.end()) {
        n.decl = f->second;
        return;
      }
      err("unresolved name '" + n.text + "'", n);
    }
    for (int c : n.children) resolve_expr(c);
    if (n.kind == NodeKind::BinaryOp && (n.text == "&&" || n.text == "||"))
      mark_non_hoistable(n.children[1]);
  }

  void mark_non_hoistable(int id) {
    AstNode& n = node(id);
    n.non_hoistable = true;
    for (int c : n.children) mark_non_hoistable(c);
  }

  CompilationUnit& unit_;
  std::map<std::string, int> fields_;
  std::vector<std::map<std::string, int>> scopes_;
};

}  // namespace

void resolve_unit(CompilationUnit& unit) { Resolver(unit).run(); }

}  // namespace nullcause::minil::detail
