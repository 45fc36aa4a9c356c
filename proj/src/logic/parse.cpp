#include "nullcause/logic/parse.hpp"

#include <cctype>
#include <map>
#include <utility>

namespace nullcause::logic {

ParseError::ParseError(const std::string& msg, int line, int col)
    : std::runtime_error(msg + " at line " + std::to_string(line) + ", column " +
                         std::to_string(col)),
      line(line),
      col(col) {}

namespace {

enum class Tok {
  Atom,   // plain or quoted
  Var,
  Int,
  Str,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Bar,
  Comma,
  Semicolon,
  Dot,
  Neck,    // :-
  NafOp,   // \+
  Bang,    // !
  Unify,   // =
  Eq,      // ==
  Neq,     // \==
  Le,      // =<
  Lt,      // <
  End,
};

struct Token {
  Tok kind;
  std::string text;
  long long value = 0;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }
  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  [[noreturn]] void err(const std::string& msg) const {
    throw ParseError(msg, line_, col_);
  }

  char cur() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  char ahead(std::size_t n) const {
    return pos_ + n < text_.size() ? text_[pos_ + n] : '\0';
  }

  void bump() {
    if (cur() == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_layout() {
    for (;;) {
      char c = cur();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        bump();
      } else if (c == '%') {
        while (cur() != '\0' && cur() != '\n') bump();
      } else {
        return;
      }
    }
  }

  void advance() {
    skip_layout();
    tok_ = Token{};
    tok_.line = line_;
    tok_.col = col_;
    char c = cur();
    if (c == '\0') {
      tok_.kind = Tok::End;
      return;
    }
    if (std::islower(static_cast<unsigned char>(c))) {
      std::string s;
      while (std::isalnum(static_cast<unsigned char>(cur())) || cur() == '_') {
        s += cur();
        bump();
      }
      tok_.kind = Tok::Atom;
      tok_.text = std::move(s);
      return;
    }
    if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
      std::string s;
      while (std::isalnum(static_cast<unsigned char>(cur())) || cur() == '_') {
        s += cur();
        bump();
      }
      tok_.kind = Tok::Var;
      tok_.text = std::move(s);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      long long v = 0;
      while (std::isdigit(static_cast<unsigned char>(cur()))) {
        v = v * 10 + (cur() - '0');
        bump();
      }
      tok_.kind = Tok::Int;
      tok_.value = v;
      return;
    }
    if (c == '\'') {
      bump();
      std::string s;
      for (;;) {
        if (cur() == '\0') err("unterminated quoted atom");
        if (cur() == '\'') {
          if (ahead(1) == '\'') {
            s += '\'';
            bump();
            bump();
            continue;
          }
          bump();
          break;
        }
        s += cur();
        bump();
      }
      tok_.kind = Tok::Atom;
      tok_.text = std::move(s);
      return;
    }
    if (c == '"') {
      bump();
      std::string s;
      for (;;) {
        if (cur() == '\0') err("unterminated string");
        if (cur() == '\\' && (ahead(1) == '"' || ahead(1) == '\\')) {
          s += ahead(1);
          bump();
          bump();
          continue;
        }
        if (cur() == '"') {
          bump();
          break;
        }
        s += cur();
        bump();
      }
      tok_.kind = Tok::Str;
      tok_.text = std::move(s);
      return;
    }
    switch (c) {
      case '(': bump(); tok_.kind = Tok::LParen; return;
      case ')': bump(); tok_.kind = Tok::RParen; return;
      case '[': bump(); tok_.kind = Tok::LBracket; return;
      case ']': bump(); tok_.kind = Tok::RBracket; return;
      case '|': bump(); tok_.kind = Tok::Bar; return;
      case ',': bump(); tok_.kind = Tok::Comma; return;
      case ';': bump(); tok_.kind = Tok::Semicolon; return;
      case '.': bump(); tok_.kind = Tok::Dot; return;
      case '!': bump(); tok_.kind = Tok::Bang; return;
      case ':':
        if (ahead(1) == '-') {
          bump();
          bump();
          tok_.kind = Tok::Neck;
          return;
        }
        err("stray ':'");
      case '\\':
        if (ahead(1) == '=' && ahead(2) == '=') {
          bump();
          bump();
          bump();
          tok_.kind = Tok::Neq;
          return;
        }
        if (ahead(1) == '+') {
          bump();
          bump();
          tok_.kind = Tok::NafOp;
          return;
        }
        err("stray '\\'");
      case '=':
        if (ahead(1) == '=') {
          bump();
          bump();
          tok_.kind = Tok::Eq;
          return;
        }
        if (ahead(1) == '<') {
          bump();
          bump();
          tok_.kind = Tok::Le;
          return;
        }
        bump();
        tok_.kind = Tok::Unify;
        return;
      case '<': bump(); tok_.kind = Tok::Lt; return;
      default:
        err(std::string("unexpected character '") + c + "'");
    }
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token tok_;
};

// Recursive-descent term parser over the fixed operator table:
//   :- (1200 xfx)   ; (1100 xfy)   , (1000 xfy)   \+ (900 fy)
//   = == \== =< <  (700 xfx)
// Arguments and list elements parse below 1000, so a bare ',' separates them.
class TermParser {
 public:
  explicit TermParser(const std::string& text) : lx_(text) {}

  bool at_end() { return lx_.peek().kind == Tok::End; }
  const Token& peek() { return lx_.peek(); }

  [[noreturn]] void err(const std::string& msg) {
    throw ParseError(msg, lx_.peek().line, lx_.peek().col);
  }

  void expect(Tok k, const char* what) {
    if (lx_.peek().kind != k) err(std::string("expected ") + what);
    lx_.next();
  }

  int num_vars() const { return next_var_; }
  void reset_vars() {
    next_var_ = 0;
    var_ids_.clear();
    var_names_.clear();
  }
  const std::vector<std::string>& var_names() const { return var_names_; }

  TermPtr parse(int max_prec) {
    TermPtr left;
    if (lx_.peek().kind == Tok::NafOp && max_prec >= 900) {
      lx_.next();
      TermPtr arg = parse(900);
      left = mk_compound("\\+", {arg});
    } else {
      left = primary();
    }
    for (;;) {
      Tok k = lx_.peek().kind;
      if (k == Tok::Neck && max_prec >= 1200) {
        lx_.next();
        TermPtr right = parse(1199);
        return mk_compound(":-", {left, right});  // xfx: no further chaining
      }
      if (k == Tok::Semicolon && max_prec >= 1100) {
        lx_.next();
        TermPtr right = parse(1100);  // xfy: right associative
        return mk_compound(";", {left, right});
      }
      if (k == Tok::Comma && max_prec >= 1000) {
        lx_.next();
        TermPtr right = parse(1000);
        return mk_compound(",", {left, right});
      }
      const char* cmp = nullptr;
      if (k == Tok::Unify) cmp = "=";
      else if (k == Tok::Eq) cmp = "==";
      else if (k == Tok::Neq) cmp = "\\==";
      else if (k == Tok::Le) cmp = "=<";
      else if (k == Tok::Lt) cmp = "<";
      if (cmp && max_prec >= 700) {
        lx_.next();
        TermPtr right = parse(699);
        left = mk_compound(cmp, {left, right});
        continue;
      }
      return left;
    }
  }

 private:
  TermPtr primary() {
    const Token& t = lx_.peek();
    switch (t.kind) {
      case Tok::Int: {
        Token tok = lx_.next();
        return mk_int(tok.value);
      }
      case Tok::Str: {
        Token tok = lx_.next();
        return mk_str(tok.text);
      }
      case Tok::Bang:
        lx_.next();
        return mk_atom("!");
      case Tok::Var: {
        Token tok = lx_.next();
        return make_var(tok.text);
      }
      case Tok::LParen: {
        lx_.next();
        TermPtr inner = parse(1200);
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::LBracket: {
        lx_.next();
        if (lx_.peek().kind == Tok::RBracket) {
          lx_.next();
          return mk_atom("[]");
        }
        std::vector<TermPtr> items;
        items.push_back(parse(999));
        while (lx_.peek().kind == Tok::Comma) {
          lx_.next();
          items.push_back(parse(999));
        }
        TermPtr tail;
        if (lx_.peek().kind == Tok::Bar) {
          lx_.next();
          tail = parse(999);
        }
        expect(Tok::RBracket, "']'");
        return mk_list(items, std::move(tail));
      }
      case Tok::Atom: {
        Token tok = lx_.next();
        if (lx_.peek().kind == Tok::LParen) {
          lx_.next();
          std::vector<TermPtr> args;
          args.push_back(parse(999));
          while (lx_.peek().kind == Tok::Comma) {
            lx_.next();
            args.push_back(parse(999));
          }
          expect(Tok::RParen, "')'");
          return mk_compound(tok.text, std::move(args));
        }
        return mk_atom(tok.text);
      }
      default:
        err("expected a term");
    }
  }

  TermPtr make_var(const std::string& name) {
    if (name == "_") {
      int id = next_var_++;
      var_names_.push_back("_");
      return mk_var(id, "_");
    }
    auto it = var_ids_.find(name);
    if (it != var_ids_.end()) return mk_var(it->second, name);
    int id = next_var_++;
    var_ids_[name] = id;
    var_names_.push_back(name);
    return mk_var(id, name);
  }

  Lexer lx_;
  std::map<std::string, int> var_ids_;  // per clause/query
  std::vector<std::string> var_names_;
  int next_var_ = 0;
};

bool is_compound_named(const TermPtr& t, const char* name) {
  return t->kind == TermKind::Compound && t->text == name &&
         t->args.size() == 2;
}

bool contains_cut(const TermPtr& t) {
  if (t->kind == TermKind::Atom && t->text == "!") return true;
  if (t->kind != TermKind::Compound) return false;
  for (const auto& a : t->args)
    if (contains_cut(a)) return true;
  return false;
}

void check_disjunction_cuts(const TermPtr& t, int line) {
  if (t->kind != TermKind::Compound) return;
  if (is_compound_named(t, ";")) {
    if (contains_cut(t))
      throw ParseError("cut inside a disjunction is not supported", line, 1);
  }
  for (const auto& a : t->args) check_disjunction_cuts(a, line);
}

// Distributes ';' over ',' into one conjunction list per disjunct,
// left-to-right. Sound for solution order whenever no multi-solution goal
// precedes a disjunction; check_disjunction_cuts has already rejected the
// one shape whose semantics the split cannot reproduce.
std::vector<std::vector<TermPtr>> dnf(const TermPtr& t) {
  if (is_compound_named(t, ",")) {
    auto lhs = dnf(t->args[0]);
    auto rhs = dnf(t->args[1]);
    std::vector<std::vector<TermPtr>> out;
    for (const auto& l : lhs)
      for (const auto& r : rhs) {
        std::vector<TermPtr> joined = l;
        joined.insert(joined.end(), r.begin(), r.end());
        out.push_back(std::move(joined));
      }
    return out;
  }
  if (is_compound_named(t, ";")) {
    auto out = dnf(t->args[0]);
    auto rhs = dnf(t->args[1]);
    out.insert(out.end(), rhs.begin(), rhs.end());
    return out;
  }
  return {{t}};
}

bool valid_head(const TermPtr& t) {
  if (t->kind == TermKind::Atom) return t->text != "!" && t->text != "[]";
  if (t->kind != TermKind::Compound) return false;
  const std::string& f = t->text;
  return f != "," && f != ";" && f != ":-" && f != "\\+" && f != "=" &&
         f != "==" && f != "\\==" && f != "=<" && f != "<" && f != ".";
}

void check_goal(const TermPtr& g, int line) {
  if (g->kind == TermKind::Int || g->kind == TermKind::Str)
    throw ParseError("literal cannot be used as a goal", line, 1);
}

}  // namespace

std::vector<Clause> parse_clauses(const std::string& text) {
  TermParser p(text);
  std::vector<Clause> out;
  while (!p.at_end()) {
    int start_line = p.peek().line;
    p.reset_vars();
    TermPtr t = p.parse(1200);
    p.expect(Tok::Dot, "'.'");
    TermPtr head = t;
    TermPtr body;
    if (is_compound_named(t, ":-")) {
      head = t->args[0];
      body = t->args[1];
    }
    if (!valid_head(head))
      throw ParseError("invalid clause head", start_line, 1);
    std::vector<std::vector<TermPtr>> bodies{{}};
    if (body) {
      check_disjunction_cuts(body, start_line);
      bodies = dnf(body);
    }
    for (auto& goals : bodies) {
      for (const auto& g : goals) check_goal(g, start_line);
      Clause c;
      c.head = head;
      c.body = std::move(goals);
      c.num_vars = p.num_vars();
      c.source_line = start_line;
      out.push_back(std::move(c));
    }
  }
  return out;
}

Query parse_query(const std::string& text) {
  TermParser p(text);
  p.reset_vars();
  if (p.at_end()) throw ParseError("empty query", 1, 1);
  TermPtr goal = p.parse(1200);
  if (p.peek().kind == Tok::Dot) p.expect(Tok::Dot, "'.'");
  if (!p.at_end()) p.err("trailing input after query");
  Query q;
  q.goal = std::move(goal);
  q.num_vars = p.num_vars();
  q.var_names = p.var_names();
  return q;
}

std::string serialize_clause(const Clause& c) {
  std::string out = to_string(c.head);
  if (!c.body.empty()) {
    out += " :- ";
    for (std::size_t i = 0; i < c.body.size(); ++i) {
      if (i) out += ", ";
      out += to_string(c.body[i]);
    }
  }
  out += ".";
  return out;
}

}  // namespace nullcause::logic
