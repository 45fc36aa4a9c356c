#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace nullcause::logic {

enum class TermKind { Atom, Var, Int, Str, Compound };

struct Term;
using TermPtr = std::shared_ptr<const Term>;

// Immutable term node. Instances are shared freely; the solver never mutates
// a term, it rebinds variable slots in its own store instead.
struct Term {
  TermKind kind;
  std::string text;           // Atom: name; Var: display name; Str: contents; Compound: functor
  long long value = 0;        // Int
  int var = -1;               // Var: slot id (clause-local until renamed apart)
  std::vector<TermPtr> args;  // Compound
};

TermPtr mk_atom(std::string name);
TermPtr mk_var(int id, std::string name = "_");
TermPtr mk_int(long long v);
TermPtr mk_str(std::string s);
TermPtr mk_compound(std::string functor, std::vector<TermPtr> args);

// [a, b, c | tail]; tail defaults to the empty-list atom.
TermPtr mk_list(const std::vector<TermPtr>& items, TermPtr tail = nullptr);
// (a, b, c) as right-nested ','/2 pairs; singleton returns the item itself.
TermPtr mk_tuple(const std::vector<TermPtr>& items);

bool term_equal(const TermPtr& a, const TermPtr& b);

// Renders with operator syntax: lists as [..], ','/2 chains as (..), the
// comparison/unification operators infix, and atoms quoted when they do not
// match [a-z][A-Za-z0-9_]*. parse_* accepts everything this emits.
std::string to_string(const TermPtr& t);

// Variable bindings keyed by variable id, as produced by the standalone
// unifier below. Bindings may chain var -> var.
struct Substitution {
  std::map<int, TermPtr> map;
};

// Most general unifier extending s, or nullopt. No occurs-check: the fact
// schema is function-symbol-shallow, so cyclic bindings cannot arise from
// well-formed knowledge bases.
std::optional<Substitution> unify(const TermPtr& a, const TermPtr& b,
                                  const Substitution& s = {});

// Deep-substitutes s into t; unbound variables stay in place.
TermPtr substitute(const Substitution& s, const TermPtr& t);

}  // namespace nullcause::logic
