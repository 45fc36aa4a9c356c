#include "nullcause/logic/term.hpp"

#include <utility>

namespace nullcause::logic {

namespace {

TermPtr make(Term t) { return std::make_shared<const Term>(std::move(t)); }

}  // namespace

TermPtr mk_atom(std::string name) {
  Term t;
  t.kind = TermKind::Atom;
  t.text = std::move(name);
  return make(std::move(t));
}

TermPtr mk_var(int id, std::string name) {
  Term t;
  t.kind = TermKind::Var;
  t.text = std::move(name);
  t.var = id;
  return make(std::move(t));
}

TermPtr mk_int(long long v) {
  Term t;
  t.kind = TermKind::Int;
  t.value = v;
  return make(std::move(t));
}

TermPtr mk_str(std::string s) {
  Term t;
  t.kind = TermKind::Str;
  t.text = std::move(s);
  return make(std::move(t));
}

TermPtr mk_compound(std::string functor, std::vector<TermPtr> args) {
  if (args.empty()) return mk_atom(std::move(functor));
  Term t;
  t.kind = TermKind::Compound;
  t.text = std::move(functor);
  t.args = std::move(args);
  return make(std::move(t));
}

TermPtr mk_list(const std::vector<TermPtr>& items, TermPtr tail) {
  TermPtr out = tail ? std::move(tail) : mk_atom("[]");
  for (auto it = items.rbegin(); it != items.rend(); ++it)
    out = mk_compound(".", {*it, out});
  return out;
}

TermPtr mk_tuple(const std::vector<TermPtr>& items) {
  if (items.empty()) return mk_atom("()");
  TermPtr out = items.back();
  for (auto it = items.rbegin() + 1; it != items.rend(); ++it)
    out = mk_compound(",", {*it, out});
  return out;
}

bool term_equal(const TermPtr& a, const TermPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case TermKind::Atom:
    case TermKind::Str:
      return a->text == b->text;
    case TermKind::Int:
      return a->value == b->value;
    case TermKind::Var:
      return a->var == b->var;
    case TermKind::Compound: {
      if (a->text != b->text || a->args.size() != b->args.size()) return false;
      for (std::size_t i = 0; i < a->args.size(); ++i)
        if (!term_equal(a->args[i], b->args[i])) return false;
      return true;
    }
  }
  return false;
}

namespace {

bool plain_atom(const std::string& s) {
  if (s.empty() || s[0] < 'a' || s[0] > 'z') return false;
  for (char c : s) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
              (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return true;
}

bool is_infix_op(const std::string& f) {
  return f == "=" || f == "==" || f == "\\==" || f == "=<" || f == "<";
}

void render(const TermPtr& t, std::string& out) {
  switch (t->kind) {
    case TermKind::Atom:
      if (plain_atom(t->text) || t->text == "[]" || t->text == "!") {
        out += t->text;
      } else {
        out += '\'';
        for (char c : t->text) {
          if (c == '\'') out += "''";
          else out += c;
        }
        out += '\'';
      }
      return;
    case TermKind::Var:
      if (!t->text.empty() && t->text != "_") {
        out += t->text;
      } else {
        out += "_G" + std::to_string(t->var);
      }
      return;
    case TermKind::Int:
      out += std::to_string(t->value);
      return;
    case TermKind::Str:
      out += '"';
      for (char c : t->text) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
      }
      out += '"';
      return;
    case TermKind::Compound:
      break;
  }
  const Term& c = *t;
  if (c.text == "." && c.args.size() == 2) {
    out += '[';
    render(c.args[0], out);
    TermPtr rest = c.args[1];
    while (rest->kind == TermKind::Compound && rest->text == "." &&
           rest->args.size() == 2) {
      out += ", ";
      render(rest->args[0], out);
      rest = rest->args[1];
    }
    if (!(rest->kind == TermKind::Atom && rest->text == "[]")) {
      out += " | ";
      render(rest, out);
    }
    out += ']';
    return;
  }
  if (c.text == "," && c.args.size() == 2) {
    out += '(';
    render(c.args[0], out);
    TermPtr rest = c.args[1];
    while (rest->kind == TermKind::Compound && rest->text == "," &&
           rest->args.size() == 2) {
      out += ", ";
      render(rest->args[0], out);
      rest = rest->args[1];
    }
    out += ", ";
    render(rest, out);
    out += ')';
    return;
  }
  if (c.args.size() == 2 && is_infix_op(c.text)) {
    render(c.args[0], out);
    out += ' ';
    out += c.text;
    out += ' ';
    render(c.args[1], out);
    return;
  }
  if (c.args.size() == 1 && c.text == "\\+") {
    out += "\\+ ";
    render(c.args[0], out);
    return;
  }
  render(mk_atom(c.text), out);  // functor, with quoting rules
  out += '(';
  for (std::size_t i = 0; i < c.args.size(); ++i) {
    if (i) out += ", ";
    render(c.args[i], out);
  }
  out += ')';
}

}  // namespace

std::string to_string(const TermPtr& t) {
  std::string out;
  render(t, out);
  return out;
}

namespace {

TermPtr walk(const Substitution& s, TermPtr t) {
  while (t->kind == TermKind::Var) {
    auto it = s.map.find(t->var);
    if (it == s.map.end()) return t;
    t = it->second;
  }
  return t;
}

bool unify_into(const TermPtr& a0, const TermPtr& b0, Substitution& s) {
  TermPtr a = walk(s, a0);
  TermPtr b = walk(s, b0);
  if (a->kind == TermKind::Var && b->kind == TermKind::Var &&
      a->var == b->var)
    return true;
  if (a->kind == TermKind::Var) {
    s.map[a->var] = b;
    return true;
  }
  if (b->kind == TermKind::Var) {
    s.map[b->var] = a;
    return true;
  }
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case TermKind::Atom:
    case TermKind::Str:
      return a->text == b->text;
    case TermKind::Int:
      return a->value == b->value;
    case TermKind::Compound: {
      if (a->text != b->text || a->args.size() != b->args.size()) return false;
      for (std::size_t i = 0; i < a->args.size(); ++i)
        if (!unify_into(a->args[i], b->args[i], s)) return false;
      return true;
    }
    case TermKind::Var:
      break;
  }
  return false;
}

}  // namespace

std::optional<Substitution> unify(const TermPtr& a, const TermPtr& b,
                                  const Substitution& s) {
  Substitution out = s;
  if (!unify_into(a, b, out)) return std::nullopt;
  return out;
}

TermPtr substitute(const Substitution& s, const TermPtr& t0) {
  TermPtr t = walk(s, t0);
  if (t->kind != TermKind::Compound) return t;
  std::vector<TermPtr> args;
  args.reserve(t->args.size());
  bool changed = false;
  for (const auto& a : t->args) {
    TermPtr r = substitute(s, a);
    changed = changed || r.get() != a.get();
    args.push_back(std::move(r));
  }
  if (!changed) return t;
  return mk_compound(t->text, std::move(args));
}

}  // namespace nullcause::logic
