#include "nullcause/minil/parse.hpp"

namespace nullcause::minil {

namespace {

class Printer {
 public:
  explicit Printer(const CompilationUnit& u) : u_(u) {}

  std::string run() {
    for (std::size_t i = 0; i < u_.classes.size(); ++i) {
      if (i) out_ += "\n";
      print_class(u_.node(u_.classes[i]));
    }
    return out_;
  }

 private:
  const AstNode& node(int id) const { return u_.node(id); }

  void indent() { out_.append(static_cast<std::size_t>(depth_) * 2, ' '); }
  void line(const std::string& s) {
    indent();
    out_ += s;
    out_ += "\n";
  }

  void print_class(const AstNode& cls) {
    line("class " + cls.text + " {");
    ++depth_;
    for (int c : cls.children) {
      const AstNode& m = node(c);
      if (m.kind == NodeKind::FieldDecl) {
        line("field " + m.text + ";");
      } else {
        print_method(m);
      }
    }
    --depth_;
    line("}");
  }

  void print_method(const AstNode& m) {
    std::string head = m.is_test ? "test method " : "method ";
    head += m.text + "(";
    bool first = true;
    int body = -1;
    for (int c : m.children) {
      const AstNode& ch = node(c);
      if (ch.kind == NodeKind::Param) {
        if (!first) head += ", ";
        head += ch.text;
        first = false;
      } else {
        body = c;
      }
    }
    head += ") {";
    line(head);
    ++depth_;
    if (body >= 0)
      for (int s : node(body).children) print_stmt(node(s));
    --depth_;
    line("}");
  }

  void print_stmt(const AstNode& s) {
    switch (s.kind) {
      case NodeKind::VarDecl:
        line("var " + s.text + " = " + expr(node(s.children[0]), 0) + ";");
        return;
      case NodeKind::Assign:
        line(expr(node(s.children[0]), 0) + " = " +
             expr(node(s.children[1]), 0) + ";");
        return;
      case NodeKind::Return:
        if (s.children.empty()) {
          line("return;");
        } else {
          line("return " + expr(node(s.children[0]), 0) + ";");
        }
        return;
      case NodeKind::ExprStmt:
        line(expr(node(s.children[0]), 0) + ";");
        return;
      case NodeKind::Assert:
        line("assert " + expr(node(s.children[0]), 0) + ";");
        return;
      case NodeKind::While: {
        line("while (" + expr(node(s.children[0]), 0) + ") {");
        ++depth_;
        for (int c : node(s.children[1]).children) print_stmt(node(c));
        --depth_;
        line("}");
        return;
      }
      case NodeKind::If:
        print_if(s, "");
        return;
      default:
        line("// <unprintable>");
        return;
    }
  }

  void print_if(const AstNode& s, const std::string& prefix) {
    line(prefix + "if (" + expr(node(s.children[0]), 0) + ") {");
    ++depth_;
    for (int c : node(s.children[1]).children) print_stmt(node(c));
    --depth_;
    if (s.children.size() < 3) {
      line("}");
      return;
    }
    const AstNode& alt = node(s.children[2]);
    if (alt.kind == NodeKind::If) {
      // "} else if (...) {" — continue the chain on one line
      indent();
      out_ += "} else ";
      std::string rest = render_else_if(alt);
      out_ += rest;
      return;
    }
    line("} else {");
    ++depth_;
    for (int c : alt.children) print_stmt(node(c));
    --depth_;
    line("}");
  }

  // Renders an else-if continuation starting at "if (..." (cursor already
  // mid-line after "} else ").
  std::string render_else_if(const AstNode& s) {
    out_ += "if (" + expr(node(s.children[0]), 0) + ") {\n";
    ++depth_;
    for (int c : node(s.children[1]).children) print_stmt(node(c));
    --depth_;
    if (s.children.size() < 3) {
      line("}");
      return "";
    }
    const AstNode& alt = node(s.children[2]);
    if (alt.kind == NodeKind::If) {
      indent();
      out_ += "} else ";
      return render_else_if(alt);
    }
    line("} else {");
    ++depth_;
    for (int c : alt.children) print_stmt(node(c));
    --depth_;
    line("}");
    return "";
  }

  // Expression precedence, matching the parser's tiers; 7 = unary, 8 =
  // postfix/primary.
  static int prec_of(const AstNode& e) {
    switch (e.kind) {
      case NodeKind::BinaryOp: {
        const std::string& op = e.text;
        if (op == "||") return 1;
        if (op == "&&") return 2;
        if (op == "==" || op == "!=") return 3;
        if (op == "<") return 4;
        if (op == "+" || op == "-") return 5;
        return 6;
      }
      case NodeKind::UnaryOp:
        return 7;
      default:
        return 8;
    }
  }

  std::string expr(const AstNode& e, int min_prec) {
    std::string s = expr_bare(e);
    if (prec_of(e) < min_prec) return "(" + s + ")";
    return s;
  }

  std::string expr_bare(const AstNode& e) {
    switch (e.kind) {
      case NodeKind::Literal:
        switch (e.lit_kind) {
          case LitKind::Null: return "null";
          case LitKind::Bool: return e.bool_value ? "true" : "false";
          case LitKind::Int: return std::to_string(e.int_value);
          case LitKind::Str: {
            std::string s = "\"";
            for (char c : e.str_value) {
              if (c == '"' || c == '\\') s += '\\';
              if (c == '\n') {
                s += "\\n";
                continue;
              }
              s += c;
            }
            s += '"';
            return s;
          }
        }
        return "null";
      case NodeKind::SimpleName:
        return e.text;
      case NodeKind::This:
        return "this";
      case NodeKind::FieldAccess:
        return expr(node(e.children[0]), 8) + "." + e.text;
      case NodeKind::MethodInvoc: {
        std::string s;
        std::size_t first_arg = 0;
        if (!e.children.empty() && node(e.children[0]).role == "receiver") {
          s = expr(node(e.children[0]), 8) + ".";
          first_arg = 1;
        }
        s += e.text + "(";
        for (std::size_t i = first_arg; i < e.children.size(); ++i) {
          if (i > first_arg) s += ", ";
          s += expr(node(e.children[i]), 0);
        }
        return s + ")";
      }
      case NodeKind::BuiltinInvoc: {
        std::string s = e.text + "(";
        for (std::size_t i = 0; i < e.children.size(); ++i) {
          if (i) s += ", ";
          s += expr(node(e.children[i]), 0);
        }
        return s + ")";
      }
      case NodeKind::NewObject: {
        std::string s = "new " + e.text + "(";
        for (std::size_t i = 0; i < e.children.size(); ++i) {
          if (i) s += ", ";
          s += expr(node(e.children[i]), 0);
        }
        return s + ")";
      }
      case NodeKind::BinaryOp: {
        int p = prec_of(e);
        return expr(node(e.children[0]), p) + " " + e.text + " " +
               expr(node(e.children[1]), p + 1);
      }
      case NodeKind::UnaryOp:
        return "!" + expr(node(e.children[0]), 7);
      default:
        return "<expr>";
    }
  }

  const CompilationUnit& u_;
  std::string out_;
  int depth_ = 0;
};

}  // namespace

std::string print(const CompilationUnit& unit) { return Printer(unit).run(); }

}  // namespace nullcause::minil
