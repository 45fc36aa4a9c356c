#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "nullcause/logic/kb.hpp"
#include "nullcause/logic/parse.hpp"
#include "nullcause/logic/solver.hpp"
#include "nullcause/logic/term.hpp"

using namespace nullcause::logic;

namespace {

TermPtr shift_vars(const TermPtr& t, int base) {
  switch (t->kind) {
    case TermKind::Var:
      return mk_var(base + t->var, t->text);
    case TermKind::Compound: {
      std::vector<TermPtr> args;
      args.reserve(t->args.size());
      for (const auto& a : t->args) args.push_back(shift_vars(a, base));
      return mk_compound(t->text, std::move(args));
    }
    default:
      return t;
  }
}

// Independent SLD enumerator for pure Horn clauses (no built-ins, no cut):
// substitution-based with explicit clause renaming. Serves as the
// clause-order / goal-order oracle for the engine on generated KBs.
struct RefEngine {
  explicit RefEngine(const std::vector<Clause>& cs) : clauses(cs) {}

  const std::vector<Clause>& clauses;
  int fresh = 1000;
  bool unknown = false;

  std::vector<std::string> run(const Query& q) {
    std::vector<std::string> out;
    std::vector<TermPtr> goals{q.goal};
    step(goals, Substitution{}, q, out);
    return out;
  }

  void step(const std::vector<TermPtr>& goals, const Substitution& s,
            const Query& q, std::vector<std::string>& out) {
    if (unknown) return;
    if (goals.empty()) {
      std::string sol;
      for (int i = 0; i < q.num_vars; ++i) {
        if (i) sol += ";";
        sol += to_string(substitute(s, mk_var(i, q.var_names[i])));
      }
      out.push_back(sol);
      return;
    }
    TermPtr g = substitute(s, goals[0]);
    std::string name = g->text;
    int arity =
        g->kind == TermKind::Compound ? static_cast<int>(g->args.size()) : 0;
    bool defined = false;
    for (const auto& c : clauses) {
      if (c.pred_name() != name || c.pred_arity() != arity) continue;
      defined = true;
      int base = fresh;
      fresh += c.num_vars;
      auto s2 = unify(shift_vars(c.head, base), g, s);
      if (!s2) continue;
      std::vector<TermPtr> rest;
      for (const auto& b : c.body) rest.push_back(shift_vars(b, base));
      rest.insert(rest.end(), goals.begin() + 1, goals.end());
      step(rest, *s2, q, out);
      if (unknown) return;
    }
    if (!defined) unknown = true;
  }
};

struct EngineRun {
  bool unknown = false;
  std::vector<std::string> solutions;
};

EngineRun run_engine(const KnowledgeBase& kb, const Query& q) {
  EngineRun r;
  try {
    for (const auto& s : solve(kb, q)) {
      std::string sol;
      for (std::size_t i = 0; i < s.bindings.size(); ++i) {
        if (i) sol += ";";
        sol += to_string(s.bindings[i]);
      }
      r.solutions.push_back(sol);
    }
  } catch (const UnknownPredicate&) {
    r.unknown = true;
  }
  return r;
}

Query var_query(const std::string& pred) {
  Query q;
  q.goal = mk_compound(pred, {mk_var(0, "X")});
  q.num_vars = 1;
  q.var_names = {"X"};
  return q;
}

Query ground_query(const std::string& pred, const std::string& atom) {
  Query q;
  q.goal = mk_compound(pred, {mk_atom(atom)});
  q.num_vars = 0;
  return q;
}

}  // namespace

TEST_CASE("engine matches a reference enumerator on random stratified KBs") {
  // Three predicate strata p -> q -> r keep generated programs terminating,
  // so the oracle needs no depth guard of its own.
  const char* preds[3] = {"p", "q", "r"};
  const char* atoms[3] = {"a", "b", "c"};
  std::mt19937 rng(42);
  auto pick = [&](int n) { return static_cast<int>(rng() % n); };

  for (int iter = 0; iter < 300; ++iter) {
    std::vector<Clause> clauses;
    int n_clauses = 1 + pick(6);
    for (int i = 0; i < n_clauses; ++i) {
      int level = pick(3);
      bool fact = level == 2 || pick(3) == 0;
      Clause c;
      c.num_vars = 2;
      if (fact) {
        c.head = mk_compound(preds[level], {mk_atom(atoms[pick(3)])});
      } else {
        TermPtr head_arg = pick(2) ? mk_var(0, "X") : mk_atom(atoms[pick(3)]);
        c.head = mk_compound(preds[level], {head_arg});
        int n_goals = 1 + pick(2);
        for (int gidx = 0; gidx < n_goals; ++gidx) {
          int goal_level = level + 1 + pick(2 - level);
          TermPtr arg;
          switch (pick(3)) {
            case 0: arg = mk_var(0, "X"); break;
            case 1: arg = mk_var(1, "Y"); break;
            default: arg = mk_atom(atoms[pick(3)]); break;
          }
          c.body.push_back(mk_compound(preds[goal_level], {arg}));
        }
      }
      clauses.push_back(std::move(c));
    }

    KnowledgeBase kb;
    for (const auto& c : clauses) kb.add_clause(c);

    std::vector<Query> queries{var_query("p"), var_query("q"), var_query("r"),
                               ground_query("p", "a")};
    for (const auto& q : queries) {
      RefEngine ref(clauses);
      std::vector<std::string> expected;
      bool ref_unknown = false;
      expected = ref.run(q);
      ref_unknown = ref.unknown;

      EngineRun got = run_engine(kb, q);
      CAPTURE(iter);
      CAPTURE(to_string(q.goal));
      REQUIRE(got.unknown == ref_unknown);
      if (!ref_unknown) {
        REQUIRE(got.solutions.size() == expected.size());
        for (std::size_t i = 0; i < expected.size(); ++i)
          CHECK(got.solutions[i] == expected[i]);
      }
    }
  }
}

namespace {

// Random shallow terms; left/right sides draw from disjoint variable ranges
// so no cyclic binding can arise (the engine runs without an occurs-check).
TermPtr gen_term(std::mt19937& rng, int depth, int var_base) {
  auto pick = [&](int n) { return static_cast<int>(rng() % n); };
  int kind = depth == 0 ? pick(3) : pick(5);
  switch (kind) {
    case 0:
      return mk_atom(pick(2) ? "a" : "b");
    case 1:
      return mk_int(pick(3));
    case 2: {
      int v = var_base + pick(3);
      return mk_var(v, "V" + std::to_string(v));
    }
    case 3:
      return mk_compound("f", {gen_term(rng, depth - 1, var_base)});
    default:
      return mk_compound("g", {gen_term(rng, depth - 1, var_base),
                               gen_term(rng, depth - 1, var_base)});
  }
}

}  // namespace

TEST_CASE("unifier is sound and idempotent on random term pairs") {
  std::mt19937 rng(7);
  int successes = 0;
  for (int iter = 0; iter < 1000; ++iter) {
    TermPtr a = gen_term(rng, 3, 0);
    TermPtr b = gen_term(rng, 3, 10);
    auto s = unify(a, b);
    auto s_rev = unify(b, a);
    CHECK(s.has_value() == s_rev.has_value());
    if (!s) continue;
    ++successes;
    TermPtr ra = substitute(*s, a);
    TermPtr rb = substitute(*s, b);
    CAPTURE(to_string(a));
    CAPTURE(to_string(b));
    CHECK(term_equal(ra, rb));
    CHECK(term_equal(substitute(*s, ra), ra));  // idempotent
    TermPtr ra2 = substitute(*s_rev, a);
    TermPtr rb2 = substitute(*s_rev, b);
    CHECK(term_equal(ra2, rb2));
  }
  CHECK(successes > 100);  // the generator must actually exercise success
}

TEST_CASE("shared-variable unification stays consistent") {
  Query q = parse_query("pair(g(X, X), g(f(Y), f(a)))");
  auto s = unify(q.goal->args[0], q.goal->args[1]);
  REQUIRE(s.has_value());
  CHECK(to_string(substitute(*s, q.goal->args[0])) == "g(f(a), f(a))");
}

TEST_CASE("findall agrees with direct enumeration on random KBs") {
  std::mt19937 rng(99);
  auto pick = [&](int n) { return static_cast<int>(rng() % n); };
  const char* atoms[3] = {"a", "b", "c"};
  for (int iter = 0; iter < 100; ++iter) {
    KnowledgeBase kb;
    int n = 1 + pick(5);
    for (int i = 0; i < n; ++i)
      kb.add_fact(mk_compound("q", {mk_atom(atoms[pick(3)])}));
    kb.add_clause(parse_clauses("all(L) :- findall(X, q(X), L).\n")[0]);

    auto direct = solve(kb, var_query("q"));
    std::vector<TermPtr> items;
    for (const auto& s : direct) items.push_back(s.bindings[0]);
    std::string expected = to_string(mk_list(items));

    auto sols = solve(kb, parse_query("all(L)"));
    REQUIRE(sols.size() == 1);
    CHECK(to_string(sols[0].bindings[0]) == expected);
  }
}

TEST_CASE("every query either completes or reports DepthExceeded") {
  KnowledgeBase kb;
  for (auto& c : parse_clauses("walk(X) :- walk(X).\nwalk(done).\n"))
    kb.add_clause(std::move(c));
  SolveOptions opts;
  opts.depth_limit = 1000;
  Engine eng(kb, opts);
  CHECK_THROWS_AS(eng.solve_all(parse_query("walk(Z)")), DepthExceeded);

  // Deep but finite recursion stays under the default limit.
  std::string chain = "count(0).\ncount(s(N)) :- count(N).\n";
  KnowledgeBase kb2;
  for (auto& c : parse_clauses(chain)) kb2.add_clause(std::move(c));
  std::string deep = "count(";
  for (int i = 0; i < 5000; ++i) deep += "s(";
  deep += "0";
  for (int i = 0; i < 5000; ++i) deep += ")";
  deep += ")";
  CHECK(solve(kb2, parse_query(deep)).size() == 1);
}
