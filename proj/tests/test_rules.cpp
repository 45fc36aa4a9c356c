#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <utility>
#include <vector>

#include "nullcause/facts/atoms.hpp"
#include "nullcause/facts/dynamic_facts.hpp"
#include "nullcause/facts/probes.hpp"
#include "nullcause/facts/static_facts.hpp"
#include "nullcause/minil/parse.hpp"
#include "nullcause/rules/query.hpp"
#include "nullcause/rules/rulebase.hpp"
#include "nullcause/runtime/interp.hpp"
#include "nullcause/runtime/program.hpp"

using namespace nullcause;
using rules::Candidate;
using rules::RankStatus;
using rules::RuleBase;

namespace {

const char* kRepoSource = R"(class Repo {
  method find(key) {
    if (key == "k") { return "v"; }

    return null;
  }
  method size(key) {
    var item = find(key);
    return len(item);
  }
}

class RepoTest {
  test method testSize() {
    var n = new Repo().size("x");
    assert n == 0;
  }
}
)";

runtime::Program make_program(
    std::vector<std::pair<std::string, std::string>> sources) {
  std::vector<minil::CompilationUnit> units;
  for (auto& [id, src] : sources) units.push_back(minil::parse(src, id));
  return runtime::link(std::move(units));
}

// The full fact pipeline: coverage run, probes, probed run, knowledge base.
logic::KnowledgeBase build_kb(const std::string& class_id,
                              const std::string& source) {
  runtime::Program program = make_program({{class_id, source}});
  auto outcomes = runtime::run_tests(program);

  facts::CoverageMap covered, breakpoints;
  for (const auto& t : outcomes) {
    for (const auto& [cls, line] : t.covered) {
      covered[cls].insert(line);
      if (t.verdict == runtime::Verdict::Npe) breakpoints[cls].insert(line);
    }
  }
  facts::AtomTable atoms = facts::assign_atoms(program, covered);
  facts::FactBase statics = facts::static_facts(program, atoms, covered);
  facts::ProbedProgram probed =
      facts::inject_probes(program, atoms, breakpoints);

  std::vector<std::pair<std::string, std::string>> probed_sources(
      probed.sources.begin(), probed.sources.end());
  runtime::RunOptions options;
  options.probe_mode = true;
  options.breakpoints = breakpoints;
  auto probed_outcomes =
      runtime::run_tests(make_program(probed_sources), options);
  facts::DynamicFacts dyn =
      facts::dynamic_facts(program, atoms, probed, probed_outcomes);

  std::vector<logic::TermPtr> all = statics.facts;
  all.insert(all.end(), dyn.facts.facts.begin(), dyn.facts.facts.end());
  return rules::assemble_kb(all, RuleBase::embedded());
}

std::string show(const Candidate& c) {
  return c.scheme + " " + c.npe_type + " " + c.cause + " @ " +
         logic::to_string(c.loc);
}

}  // namespace

TEST_CASE("embedded rules parse, lint, and carry a version") {
  RuleBase rb = RuleBase::embedded();
  CHECK(rb.version() == "npe-rules-v1");

  CHECK(rb.predicates() ==
        std::vector<std::string>{
            "npe", "null_ref", "null_arg_passed", "cause_of", "copied_from",
            "null_at", "null_pred", "originated_from", "origin_reach",
            "can_be_transferred", "transfer_reach", "find_method",
            "is_null_return", "val_assigned_in_method", "only_target_method",
            "from_test", "arg_passing_method", "prefer_cond", "filter_cond"});

  // The disjunctive transfer clause splits in two: six clauses drive the
  // scheme/type attribution.
  int cause_clauses = 0;
  for (const auto& c : rb.clauses())
    if (c.pred_name() == "cause_of") ++cause_clauses;
  CHECK(cause_clauses == 6);
}

TEST_CASE("rule linting rejects broken rule sets") {
  CHECK_THROWS_AS(RuleBase::from_text("a(X) :- b(X).\n"), rules::LintError);

  CHECK_THROWS_WITH_AS(
      RuleBase::from_text("% version: test\na(X) :- no_such_pred(X).\n"),
      doctest::Contains("no_such_pred/1"), rules::LintError);

  // Negation and findall are linted inside-out too.
  CHECK_THROWS_WITH_AS(
      RuleBase::from_text("% version: test\na(X) :- \\+ mystery(X).\n"),
      doctest::Contains("mystery/1"), rules::LintError);
  CHECK_THROWS_WITH_AS(
      RuleBase::from_text(
          "% version: test\na(L) :- findall(X, ghost(X), L).\n"),
      doctest::Contains("ghost/1"), rules::LintError);

  // Heads may not shadow facts or built-ins.
  CHECK_THROWS_WITH_AS(
      RuleBase::from_text("% version: test\nval(A, B, C) :- true.\n"),
      doctest::Contains("fact predicate"), rules::LintError);
  CHECK_THROWS_WITH_AS(
      RuleBase::from_text("% version: test\nmember(X, Y) :- true.\n"),
      doctest::Contains("built-in"), rules::LintError);

  // Referencing facts and own heads is fine.
  RuleBase ok = RuleBase::from_text(
      "% version: test\nboth(E) :- val(E, null, _), helper(E).\n"
      "helper(E) :- literal(E, null, _).\n");
  CHECK(ok.version() == "test");
}

TEST_CASE("disabling a predicate stubs it out") {
  RuleBase rb = RuleBase::embedded();
  RuleBase off = rb.with_disabled("only_target_method");

  int clauses = 0;
  for (const auto& c : off.clauses())
    if (c.pred_name() == "only_target_method") ++clauses;
  CHECK(clauses == 1);
  CHECK(off.version() == "npe-rules-v1 (disabled: only_target_method)");
  // One clause replaced one clause; everything else is untouched.
  CHECK(off.clauses().size() == rb.clauses().size());

  CHECK_THROWS_AS(rb.with_disabled("no_such_rule"), std::invalid_argument);

  // The stub fails instead of erroring.
  logic::KnowledgeBase kb = rules::assemble_kb({}, off);
  auto solutions = logic::solve(kb, logic::parse_query(
                                        "only_target_method(m_x_1)"));
  CHECK(solutions.empty());
}

TEST_CASE("empty fact relations answer no instead of unknown") {
  logic::KnowledgeBase kb = rules::assemble_kb({}, RuleBase::embedded());
  CHECK(rules::query_causes(kb).empty());
  auto solutions = logic::solve(
      kb, logic::parse_query("cause_of(npe(x, line(c, 1)), Cause, Loc)"));
  CHECK(solutions.empty());
}

TEST_CASE("cause candidates for the repository fixture") {
  logic::KnowledgeBase kb = build_kb("repo", kRepoSource);
  std::vector<Candidate> cs = rules::query_causes(kb);

  std::vector<std::string> got;
  for (const auto& c : cs) got.push_back(show(c));
  CHECK(got == std::vector<std::string>{
                   "direct null_arg v_item_1 @ line(repo, 9)",
                   "origin null_arg expr4 @ line(repo, 5)",
                   "transfer null_arg v_item_1 @ line(repo, 8)",
                   "transfer null_arg expr5 @ line(repo, 8)",
                   "transfer null_arg expr4 @ line(repo, 5)",
               });
  for (const auto& c : cs) {
    CHECK(c.test == "t_testSize_1");
    CHECK(c.expr == "v_item_1");
    CHECK(logic::to_string(c.line) == "line(repo, 9)");
  }

  // Every surviving location sits in product code that manufactured the
  // null: all preferred, none filtered.
  for (const auto& c : cs)
    CHECK(rules::rank_status(kb, c) == RankStatus::Preferred);
}

TEST_CASE("null flow edges for the repository fixture") {
  logic::KnowledgeBase kb = build_kb("repo", kRepoSource);
  auto edges = rules::null_flow_edges(kb);

  std::vector<std::string> got;
  for (const auto& e : edges)
    got.push_back(e.to_entity + " @ " + logic::to_string(e.to_loc) + " <- " +
                  e.from_entity + " @ " + logic::to_string(e.from_loc));
  CHECK(got == std::vector<std::string>{
                   "v_item_1 @ line(repo, 8) <- expr5 @ line(repo, 8)",
                   "expr5 @ line(repo, 8) <- expr4 @ line(repo, 5)",
                   "v_item_1 @ line(repo, 9) <- v_item_1 @ line(repo, 8)",
               });
}

TEST_CASE("a dereference inside the test filters down to the null return") {
  const char* source = R"(class Deref {
  method give() {
    return null;
  }
  test method testDeref() {
    var boxed = give();
    var out = boxed.inner;
    assert out == null;
  }
}
)";
  logic::KnowledgeBase kb = build_kb("d", source);
  std::vector<Candidate> cs = rules::query_causes(kb);

  std::vector<std::string> got;
  for (const auto& c : cs)
    got.push_back(show(c) + " " +
                  rules::rank_status_name(rules::rank_status(kb, c)));
  CHECK(got == std::vector<std::string>{
                   "direct null_ref v_boxed_1 @ line(d, 7) filtered",
                   "origin null_ref expr1 @ line(d, 3) neutral",
                   "transfer null_ref v_boxed_1 @ line(d, 6) filtered",
                   "transfer null_ref expr2 @ line(d, 6) filtered",
                   "transfer null_ref expr1 @ line(d, 3) neutral",
               });
}

TEST_CASE("a pass-through one-liner is filtered as an argument passer") {
  const char* source = R"(class Wrap {
  method fetch(k) {
    return lookup(k);
  }
  method lookup(k) {
    return null;
  }
  test method testWrap() {
    var got = fetch("a");
    var n = len(got);
    assert n == 0;
  }
}
)";
  logic::KnowledgeBase kb = build_kb("w", source);
  std::vector<Candidate> cs = rules::query_causes(kb);
  REQUIRE(!cs.empty());

  bool saw_fetch_line = false;
  bool saw_lookup_return = false;
  for (const auto& c : cs) {
    RankStatus st = rules::rank_status(kb, c);
    if (logic::to_string(c.loc) == "line(w, 3)") {
      // Inside fetch(), which only forwards: not a place to patch.
      saw_fetch_line = true;
      CHECK(st == RankStatus::Filtered);
    }
    if (logic::to_string(c.loc) == "line(w, 6)") {
      saw_lookup_return = true;
      CHECK(st == RankStatus::Neutral);
    }
    if (logic::to_string(c.loc) == "line(w, 9)" ||
        logic::to_string(c.loc) == "line(w, 10)") {
      CHECK(st == RankStatus::Filtered);  // test code
    }
  }
  CHECK(saw_fetch_line);
  CHECK(saw_lookup_return);
}
