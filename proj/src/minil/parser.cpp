#include <algorithm>
#include <utility>

#include "internal.hpp"
#include "lexer.hpp"
#include "nullcause/minil/parse.hpp"

namespace nullcause::minil {

ParseError::ParseError(const std::string& msg, int line, int col)
    : std::runtime_error(msg + " at line " + std::to_string(line) +
                         ", column " + std::to_string(col)),
      line(line),
      col(col) {}

NameError::NameError(const std::string& msg, int line, int col)
    : std::runtime_error(msg + " at line " + std::to_string(line) +
                         ", column " + std::to_string(col)),
      line(line),
      col(col) {}

namespace {

using detail::Token;
using detail::TokKind;

class Parser {
 public:
  Parser(const std::string& source, const std::string& class_id)
      : source_(source), class_id_(class_id), toks_(detail::lex(source)) {}

  CompilationUnit run() {
    unit_.class_id = class_id_;
    unit_.qualified_name = class_id_;
    unit_.source = source_;
    int root = add(NodeKind::Unit);
    set_range(root, 0, static_cast<int>(source_.size()), 1, last_line());
    while (!at_end()) {
      int cls = parse_class();
      attach(root, cls, "classes", static_cast<int>(unit_.classes.size()));
      unit_.classes.push_back(cls);
    }
    renumber(root);
    detail::resolve_unit(unit_);
    return std::move(unit_);
  }

 private:
  // ---- token plumbing -----------------------------------------------------

  const Token& peek(int ahead = 0) const {
    std::size_t i = pos_ + static_cast<std::size_t>(ahead);
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == TokKind::End; }
  bool at_punct(const char* p) const {
    return peek().kind == TokKind::Punct && peek().text == p;
  }
  bool at_keyword(const char* k) const {
    return peek().kind == TokKind::Keyword && peek().text == k;
  }
  [[noreturn]] void fail(const std::string& expected) const {
    const Token& t = peek();
    std::string got = t.kind == TokKind::End ? "end of input" : "'" + t.text + "'";
    if (t.kind == TokKind::Int) got = "a number";
    if (t.kind == TokKind::Str) got = "a string";
    throw ParseError("expected " + expected + ", found " + got, t.line, t.col);
  }
  const Token& expect_punct(const char* p) {
    if (!at_punct(p)) fail(std::string("'") + p + "'");
    return next();
  }
  const Token& expect_keyword(const char* k) {
    if (!at_keyword(k)) fail(std::string("'") + k + "'");
    return next();
  }
  const Token& expect_ident(const char* what) {
    if (peek().kind != TokKind::Ident) fail(what);
    return next();
  }
  int last_line() const { return toks_.back().line; }
  // Offset one past the token consumed most recently.
  int prev_end() const { return toks_[pos_ - 1].end; }
  int prev_line() const { return toks_[pos_ - 1].line; }

  // ---- arena plumbing -----------------------------------------------------

  int add(NodeKind k) {
    AstNode n;
    n.kind = k;
    n.id = static_cast<int>(unit_.nodes.size());
    unit_.nodes.push_back(std::move(n));
    return static_cast<int>(unit_.nodes.size()) - 1;
  }
  AstNode& node(int id) { return unit_.nodes[static_cast<std::size_t>(id)]; }
  void attach(int parent, int child, std::string role, int idx = -1) {
    node(child).parent = parent;
    node(child).role = std::move(role);
    node(child).role_index = idx;
    node(parent).children.push_back(child);
  }
  void set_range(int id, int start, int end, int start_line, int end_line) {
    SourceRange& r = node(id).range;
    r.class_id = class_id_;
    r.start = start;
    r.length = end - start;
    r.start_line = start_line;
    r.end_line = end_line;
  }
  void span_tokens(int id, const Token& first) {
    set_range(id, first.offset, prev_end(), first.line, prev_line());
  }
  void span_children(int id, int first_child) {
    const SourceRange& a = node(first_child).range;
    set_range(id, a.start, prev_end(), a.start_line, prev_line());
  }

  // ---- declarations -------------------------------------------------------

  int parse_class() {
    const Token& kw = expect_keyword("class");
    const Token& name = expect_ident("a class name");
    int cls = add(NodeKind::ClassDecl);
    node(cls).text = name.text;
    expect_punct("{");
    int fields = 0, methods = 0;
    while (!at_punct("}")) {
      if (at_keyword("field")) {
        attach(cls, parse_field(), "fields", fields++);
      } else if (at_keyword("method") || at_keyword("test")) {
        attach(cls, parse_method(), "methods", methods++);
      } else {
        fail("'field', 'method', 'test', or '}'");
      }
    }
    expect_punct("}");
    span_tokens(cls, kw);
    return cls;
  }

  int parse_field() {
    const Token& kw = expect_keyword("field");
    const Token& name = expect_ident("a field name");
    expect_punct(";");
    int f = add(NodeKind::FieldDecl);
    node(f).text = name.text;
    span_tokens(f, kw);
    return f;
  }

  int parse_method() {
    const Token& first = peek();
    bool is_test = false;
    if (at_keyword("test")) {
      next();
      is_test = true;
    }
    expect_keyword("method");
    const Token& name = expect_ident("a method name");
    int m = add(NodeKind::MethodDecl);
    node(m).text = name.text;
    node(m).is_test = is_test;
    expect_punct("(");
    int idx = 0;
    if (!at_punct(")")) {
      for (;;) {
        const Token& p = expect_ident("a parameter name");
        int param = add(NodeKind::Param);
        node(param).text = p.text;
        set_range(param, p.offset, p.end, p.line, p.line);
        attach(m, param, "params", idx++);
        if (!at_punct(",")) break;
        next();
      }
    }
    expect_punct(")");
    attach(m, parse_block(), "body");
    span_tokens(m, first);
    return m;
  }

  // ---- statements ---------------------------------------------------------

  int parse_block() {
    const Token& open = expect_punct("{");
    int b = add(NodeKind::Block);
    int idx = 0;
    while (!at_punct("}")) attach(b, parse_stmt(), "stmts", idx++);
    expect_punct("}");
    span_tokens(b, open);
    return b;
  }

  int parse_stmt() {
    if (at_keyword("var")) return parse_var();
    if (at_keyword("return")) return parse_return();
    if (at_keyword("if")) return parse_if();
    if (at_keyword("while")) return parse_while();
    if (at_keyword("assert")) return parse_assert();
    const Token& first = peek();
    int e = parse_expr();
    if (at_punct("=")) {
      NodeKind k = node(e).kind;
      if (k != NodeKind::SimpleName && k != NodeKind::FieldAccess)
        throw ParseError("invalid assignment target", first.line, first.col);
      next();
      int rhs = parse_expr();
      expect_punct(";");
      int a = add(NodeKind::Assign);
      attach(a, e, "lhs");
      attach(a, rhs, "rhs");
      span_tokens(a, first);
      return a;
    }
    expect_punct(";");
    int s = add(NodeKind::ExprStmt);
    attach(s, e, "expr");
    span_tokens(s, first);
    return s;
  }

  int parse_var() {
    const Token& kw = expect_keyword("var");
    const Token& name = expect_ident("a variable name");
    int v = add(NodeKind::VarDecl);
    node(v).text = name.text;
    expect_punct("=");
    attach(v, parse_expr(), "init");
    expect_punct(";");
    span_tokens(v, kw);
    return v;
  }

  int parse_return() {
    const Token& kw = expect_keyword("return");
    int r = add(NodeKind::Return);
    if (!at_punct(";")) attach(r, parse_expr(), "value");
    expect_punct(";");
    span_tokens(r, kw);
    return r;
  }

  int parse_if() {
    const Token& kw = expect_keyword("if");
    int s = add(NodeKind::If);
    expect_punct("(");
    attach(s, parse_expr(), "cond");
    expect_punct(")");
    attach(s, parse_block(), "then");
    if (at_keyword("else")) {
      next();
      if (at_keyword("if")) {
        attach(s, parse_if(), "else");
      } else {
        attach(s, parse_block(), "else");
      }
    }
    span_tokens(s, kw);
    return s;
  }

  int parse_while() {
    const Token& kw = expect_keyword("while");
    int s = add(NodeKind::While);
    expect_punct("(");
    attach(s, parse_expr(), "cond");
    expect_punct(")");
    attach(s, parse_block(), "body");
    span_tokens(s, kw);
    return s;
  }

  int parse_assert() {
    const Token& kw = expect_keyword("assert");
    int s = add(NodeKind::Assert);
    attach(s, parse_expr(), "cond");
    expect_punct(";");
    span_tokens(s, kw);
    return s;
  }

  // ---- expressions --------------------------------------------------------

  int parse_expr() { return parse_binary(1); }

  // Precedence tiers: 1 '||', 2 '&&', 3 '==' '!=', 4 '<', 5 '+' '-', 6 '*'.
  static int binop_prec(const std::string& op) {
    if (op == "||") return 1;
    if (op == "&&") return 2;
    if (op == "==" || op == "!=") return 3;
    if (op == "<") return 4;
    if (op == "+" || op == "-") return 5;
    if (op == "*") return 6;
    return 0;
  }

  int parse_binary(int min_prec) {
    int left = parse_unary();
    for (;;) {
      if (peek().kind != TokKind::Punct) return left;
      int prec = binop_prec(peek().text);
      if (prec == 0 || prec < min_prec) return left;
      std::string op = next().text;
      int right = parse_binary(prec + 1);  // all binary operators left-assoc
      int b = add(NodeKind::BinaryOp);
      node(b).text = op;
      attach(b, left, "lhs");
      attach(b, right, "rhs");
      span_children(b, left);
      left = b;
    }
  }

  int parse_unary() {
    if (at_punct("!")) {
      const Token& bang = next();
      int operand = parse_unary();
      int u = add(NodeKind::UnaryOp);
      node(u).text = "!";
      attach(u, operand, "operand");
      set_range(u, bang.offset, prev_end(), bang.line, prev_line());
      return u;
    }
    return parse_postfix();
  }

  int parse_postfix() {
    int e = parse_primary();
    while (at_punct(".")) {
      next();
      const Token& name = expect_ident("a field or method name");
      if (at_punct("(")) {
        std::vector<int> args = parse_args();
        int call = add(NodeKind::MethodInvoc);
        node(call).text = name.text;
        attach(call, e, "receiver");
        for (std::size_t i = 0; i < args.size(); ++i)
          attach(call, args[i], "args", static_cast<int>(i));
        span_children(call, e);
        e = call;
      } else {
        int fa = add(NodeKind::FieldAccess);
        node(fa).text = name.text;
        attach(fa, e, "receiver");
        span_children(fa, e);
        e = fa;
      }
    }
    return e;
  }

  std::vector<int> parse_args() {
    expect_punct("(");
    std::vector<int> args;
    if (!at_punct(")")) {
      for (;;) {
        args.push_back(parse_expr());
        if (!at_punct(",")) break;
        next();
      }
    }
    expect_punct(")");
    return args;
  }

  static bool is_builtin_name(const std::string& s) {
    return s == "len" || s == "concat" || s == "parse_int";
  }

  int parse_primary() {
    const Token& t = peek();
    if (t.kind == TokKind::Int) {
      next();
      int n = add(NodeKind::Literal);
      node(n).lit_kind = LitKind::Int;
      node(n).int_value = t.value;
      span_tokens(n, t);
      return n;
    }
    if (t.kind == TokKind::Str) {
      next();
      int n = add(NodeKind::Literal);
      node(n).lit_kind = LitKind::Str;
      node(n).str_value = t.str;
      span_tokens(n, t);
      return n;
    }
    if (t.kind == TokKind::Keyword) {
      if (t.text == "null" || t.text == "true" || t.text == "false") {
        next();
        int n = add(NodeKind::Literal);
        if (t.text == "null") {
          node(n).lit_kind = LitKind::Null;
        } else {
          node(n).lit_kind = LitKind::Bool;
          node(n).bool_value = t.text == "true";
        }
        span_tokens(n, t);
        return n;
      }
      if (t.text == "this") {
        next();
        int n = add(NodeKind::This);
        span_tokens(n, t);
        return n;
      }
      if (t.text == "new") {
        next();
        const Token& cls = expect_ident("a class name");
        std::vector<int> args = parse_args();
        int n = add(NodeKind::NewObject);
        node(n).text = cls.text;
        for (std::size_t i = 0; i < args.size(); ++i)
          attach(n, args[i], "args", static_cast<int>(i));
        span_tokens(n, t);
        return n;
      }
      fail("an expression");
    }
    if (t.kind == TokKind::Ident) {
      next();
      if (at_punct("(")) {
        std::vector<int> args = parse_args();
        int call =
            add(is_builtin_name(t.text) ? NodeKind::BuiltinInvoc
                                        : NodeKind::MethodInvoc);
        node(call).text = t.text;
        for (std::size_t i = 0; i < args.size(); ++i)
          attach(call, args[i], "args", static_cast<int>(i));
        span_tokens(call, t);
        return call;
      }
      int n = add(NodeKind::SimpleName);
      node(n).text = t.text;
      span_tokens(n, t);
      return n;
    }
    if (at_punct("(")) {
      next();
      int inner = parse_expr();
      expect_punct(")");
      return inner;  // grouping only; no node of its own
    }
    fail("an expression");
  }

  // ---- pre-order renumbering ----------------------------------------------

  void renumber(int root) {
    std::vector<int> order;
    order.reserve(unit_.nodes.size());
    std::vector<int> stack{root};
    while (!stack.empty()) {
      int id = stack.back();
      stack.pop_back();
      order.push_back(id);
      const auto& ch = node(id).children;
      for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
    }
    std::vector<int> perm(unit_.nodes.size(), -1);
    for (std::size_t i = 0; i < order.size(); ++i)
      perm[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
    std::vector<AstNode> renumbered(unit_.nodes.size());
    for (std::size_t old = 0; old < unit_.nodes.size(); ++old) {
      AstNode n = std::move(unit_.nodes[old]);
      n.id = perm[old];
      if (n.parent >= 0) n.parent = perm[static_cast<std::size_t>(n.parent)];
      for (int& c : n.children) c = perm[static_cast<std::size_t>(c)];
      renumbered[static_cast<std::size_t>(perm[old])] = std::move(n);
    }
    unit_.nodes = std::move(renumbered);
    for (int& c : unit_.classes) c = perm[static_cast<std::size_t>(c)];
  }

  const std::string& source_;
  std::string class_id_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  CompilationUnit unit_;
};

}  // namespace

CompilationUnit parse(const std::string& source, const std::string& class_id) {
  return Parser(source, class_id).run();
}

namespace detail {

int column_of(const std::string& source, int offset) {
  int col = 1;
  for (int i = offset - 1; i >= 0 && source[static_cast<std::size_t>(i)] != '\n';
       --i)
    ++col;
  return col;
}

}  // namespace detail

}  // namespace nullcause::minil
