// Evaluation bench: corpus loading and validation, match metrics, the
// rule-free flow oracle, and ranking-predicate influence.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "nullcause/bench/ablation.hpp"
#include "nullcause/bench/corpus.hpp"
#include "nullcause/bench/metrics.hpp"
#include "nullcause/bench/oracle.hpp"
#include "nullcause/localizer/pipeline.hpp"

using namespace nullcause;
using bench::BugCase;
using bench::MatchResult;

namespace fs = std::filesystem;

namespace {

// A report with one candidate per (class, line), ranks 1..n in order.
localizer::Report make_report(
    std::vector<std::tuple<std::string, int, std::string, std::string>>
        rows) {
  localizer::Report r;
  int rank = 0;
  for (auto& [cls, line, scheme, type] : rows) {
    localizer::RankedCause c;
    c.rank = ++rank;
    c.cause = localizer::Spot{"e" + std::to_string(rank), cls, line};
    c.scheme = scheme;
    c.npe_type = type;
    c.status = "neutral";
    r.candidates.push_back(c);
  }
  return r;
}

BugCase make_bug(std::string id,
                 std::vector<std::pair<std::string, int>> locations) {
  BugCase bug;
  bug.id = std::move(id);
  for (auto& [cls, line] : locations)
    bug.fault_locations.push_back(bench::FaultLocation{cls, line});
  return bug;
}

// Writes a bug directory under a fresh temp root; returns the bug path.
fs::path write_bug_dir(const std::string& name, const std::string& source,
                       const std::string& ground_truth) {
  fs::path dir = fs::temp_directory_path() / "nullcause_bench_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir / "src");
  std::ofstream(dir / "src" / "m.mnl") << source;
  std::ofstream(dir / "ground_truth.json") << ground_truth;
  return dir;
}

const char* kBug01Dir = NULLCAUSE_SOURCE_DIR "/corpus/bug01";

}  // namespace

TEST_CASE("two locations found at ranks 1 and 3 examine three candidates") {
  localizer::Report report = make_report({{"m", 4, "direct", "null_arg"},
                                          {"m", 9, "origin", "null_arg"},
                                          {"m", 7, "transfer", "null_arg"}});
  BugCase bug = make_bug("b", {{"m", 4}, {"m", 7}});

  MatchResult r = bench::evaluate(report, bug, 10);
  CHECK(r.category == "matched");
  CHECK(r.fault_locations == 2);
  CHECK(r.examined == 3);
  CHECK(r.hits[0] == 1);  // within top 1
  CHECK(r.hits[1] == 1);
  CHECK(r.hits[2] == 2);
  CHECK(r.hits[9] == 2);
  REQUIRE(r.hit_kinds.size() == 2);
  CHECK(r.hit_kinds[0] == std::pair<std::string, std::string>{"direct",
                                                              "null_arg"});
  CHECK(r.hit_kinds[1] == std::pair<std::string, std::string>{"transfer",
                                                              "null_arg"});

  bench::Aue waste = bench::aue({r});
  CHECK_FALSE(waste.empty);
  CHECK(waste.num == 1);  // examined 3, needed 2
  CHECK(waste.den == 1);
  CHECK(waste.value() == doctest::Approx(1.0));
}

TEST_CASE("a bug counts as matched only when every location is found") {
  localizer::Report report = make_report({{"m", 4, "direct", "null_ref"}});

  MatchResult partial =
      bench::evaluate(report, make_bug("b", {{"m", 4}, {"m", 9}}), 10);
  CHECK(partial.category == "partially_matched");
  CHECK(partial.examined == 10);  // searched the whole window
  CHECK(partial.hits[0] == 1);

  MatchResult miss = bench::evaluate(report, make_bug("b", {{"m", 9}}), 10);
  CHECK(miss.category == "not_matched");
  CHECK(miss.examined == 10);
  CHECK(miss.hits[9] == 0);
  CHECK(miss.hit_kinds.empty());

  // Candidates past the window are invisible.
  localizer::Report deep = make_report({{"m", 1, "direct", "null_arg"},
                                        {"m", 2, "origin", "null_arg"},
                                        {"m", 3, "origin", "null_arg"},
                                        {"m", 9, "origin", "null_arg"}});
  MatchResult cut = bench::evaluate(deep, make_bug("b", {{"m", 9}}), 3);
  CHECK(cut.category == "not_matched");
  CHECK(cut.examined == 3);
}

TEST_CASE("waste averages extra candidates over matched bugs only") {
  // Three matched bugs wasting 0, 1 and 2 candidates.
  localizer::Report exact = make_report({{"m", 4, "direct", "null_arg"},
                                         {"m", 7, "origin", "null_arg"}});
  MatchResult a =
      bench::evaluate(exact, make_bug("a", {{"m", 4}, {"m", 7}}), 10);
  CHECK(a.examined == 2);

  localizer::Report spread = make_report({{"m", 4, "direct", "null_arg"},
                                          {"m", 5, "origin", "null_arg"},
                                          {"m", 7, "origin", "null_arg"}});
  MatchResult b =
      bench::evaluate(spread, make_bug("b", {{"m", 4}, {"m", 7}}), 10);
  MatchResult c = bench::evaluate(spread, make_bug("c", {{"m", 7}}), 10);
  MatchResult skipped = bench::evaluate(spread, make_bug("d", {{"x", 1}}), 10);

  bench::Aue waste = bench::aue({a, b, c, skipped});
  CHECK(waste.num == 0 + 1 + 2);
  CHECK(waste.den == 3);
  CHECK(waste.value() == doctest::Approx(1.0));

  CHECK(bench::aue({skipped}).empty);
  CHECK(bench::aue({skipped}).value() == 0.0);
}

TEST_CASE("summary tallies categories, depth curve and deduction kinds") {
  localizer::Report report = make_report({{"m", 4, "direct", "null_arg"},
                                          {"m", 7, "origin", "null_ref"}});
  MatchResult top1 = bench::evaluate(report, make_bug("a", {{"m", 4}}), 10);
  MatchResult top2 =
      bench::evaluate(report, make_bug("b", {{"m", 4}, {"m", 7}}), 10);
  MatchResult none = bench::evaluate(report, make_bug("c", {{"x", 9}}), 10);

  bench::Summary s = bench::summarize({top1, top2, none});
  CHECK(s.corpus_size == 3);
  CHECK(s.matched == 2);
  CHECK(s.partially_matched == 0);
  CHECK(s.not_matched == 1);
  CHECK(s.matched_within[0] == 1);  // only bug a is complete within top 1
  CHECK(s.matched_within[1] == 2);
  CHECK(s.matched_within[9] == 2);
  CHECK(s.waste.num == 0);
  CHECK(s.waste.den == 2);
  CHECK(s.scheme_counts.at("direct") == 2);
  CHECK(s.scheme_counts.at("origin") == 1);
  CHECK(s.combo_counts.at("direct/null_arg") == 2);
  CHECK(s.combo_counts.at("origin/null_ref") == 1);
}

TEST_CASE("the seeded repository bug loads with its ground truth") {
  BugCase bug = bench::load_bug(kBug01Dir);
  CHECK(bug.id == "bug01");
  REQUIRE(bug.sources.size() == 1);
  CHECK(bug.sources[0].first == "repo");
  REQUIRE(bug.failing_tests.size() == 1);
  CHECK(bug.failing_tests[0] == "RepoTest.testSize");
  REQUIRE(bug.fault_locations.size() == 1);
  CHECK(bug.fault_locations[0].class_id == "repo");
  CHECK(bug.fault_locations[0].line == 5);
  REQUIRE(bug.causes.size() == 1);
  CHECK(bug.causes[0].start == 82);
  CHECK(bug.causes[0].length == 4);  // the null literal
  CHECK(bug.in_scope);
  CHECK_FALSE(bug.notes.empty());
}

TEST_CASE("a bug directory must hold what its ground truth promises") {
  const std::string passing =
      "class A {\n"
      "  test method testOk() {\n"
      "    assert 1 == 1;\n"
      "  }\n"
      "}\n";
  const std::string crashing =
      "class A {\n"
      "  method go() {\n"
      "    var x = null;\n"
      "    return len(x);\n"
      "  }\n"
      "  test method testGo() {\n"
      "    var n = go();\n"
      "    assert n == 0;\n"
      "  }\n"
      "}\n";

  SUBCASE("a declared failing test that passes is rejected") {
    fs::path dir = write_bug_dir(
        "passes", passing,
        R"({"failing_tests": ["A.testOk"],
            "fault_locations": [{"class": "m", "line": 3}],
            "causes": [{"class": "m", "start": 0, "length": 5}],
            "in_scope": true})");
    CHECK_THROWS_WITH_AS(bench::load_bug(dir.string()),
                         doctest::Contains("do not match"),
                         bench::ValidationError);
  }

  SUBCASE("an undeclared null failure is rejected") {
    fs::path dir = write_bug_dir(
        "undeclared", crashing,
        R"({"failing_tests": ["A.testOther"],
            "fault_locations": [{"class": "m", "line": 3}],
            "causes": [{"class": "m", "start": 38, "length": 4}],
            "in_scope": true})");
    CHECK_THROWS_AS(bench::load_bug(dir.string()), bench::ValidationError);
  }

  SUBCASE("a cause range must cover one expression exactly") {
    // Offset 38 is the null literal; 37 starts one byte early.
    fs::path dir = write_bug_dir(
        "range", crashing,
        R"({"failing_tests": ["A.testGo"],
            "fault_locations": [{"class": "m", "line": 3}],
            "causes": [{"class": "m", "start": 37, "length": 4}],
            "in_scope": true})");
    CHECK_THROWS_AS(bench::load_bug(dir.string()), bench::ValidationError);

    fs::path good = write_bug_dir(
        "range_ok", crashing,
        R"({"failing_tests": ["A.testGo"],
            "fault_locations": [{"class": "m", "line": 3}],
            "causes": [{"class": "m", "start": 38, "length": 4}],
            "in_scope": true})");
    BugCase bug = bench::load_bug(good.string());
    CHECK(bug.id == "range_ok");
  }

  SUBCASE("a fault line outside the file is rejected") {
    fs::path dir = write_bug_dir(
        "line", crashing,
        R"({"failing_tests": ["A.testGo"],
            "fault_locations": [{"class": "m", "line": 99}],
            "causes": [{"class": "m", "start": 38, "length": 4}],
            "in_scope": true})");
    CHECK_THROWS_WITH_AS(bench::load_bug(dir.string()),
                         doctest::Contains("out of range"),
                         bench::ValidationError);
  }

  SUBCASE("missing pieces are rejected") {
    CHECK_THROWS_AS(bench::load_bug("/no/such/bug"), bench::ValidationError);
    fs::path dir = write_bug_dir("nogt", crashing, "");
    CHECK_THROWS_AS(bench::load_bug(dir.string()), bench::ValidationError);
    fs::remove(dir / "ground_truth.json");
    CHECK_THROWS_AS(bench::load_bug(dir.string()), bench::ValidationError);
  }

  fs::remove_all(fs::temp_directory_path() / "nullcause_bench_test");
}

TEST_CASE("the flow oracle and the deduced candidates agree on bug01") {
  BugCase bug = bench::load_bug(kBug01Dir);

  std::set<bench::OracleSpot> oracle = bench::oracle_candidates(bug);
  std::set<bench::OracleSpot> expected{
      {"v_item_1", "repo", 9},  // the erring argument
      {"v_item_1", "repo", 8},  // its store
      {"expr5", "repo", 8},     // find(key)
      {"expr4", "repo", 5},     // the null literal
  };
  CHECK(oracle == expected);

  localizer::LocalizeOutput out =
      localizer::localize_sources(bug.id, bug.sources, {});
  CHECK(bench::prefilter_candidates(out) == oracle);
}

TEST_CASE("the flow oracle names the store site of a cross-file field") {
  // The constructor argument in holdertest.mnl initializes Holder's field;
  // the store spot must carry the test file's location, not the field's
  // declaring file.
  BugCase bug;
  bug.id = "crossfile";
  bug.in_scope = true;
  bug.failing_tests = {"HolderTest.testRead"};
  bug.sources = {
      {"holder",
       "class Holder {\n"
       "  field item;\n"
       "  method read() {\n"
       "    var got = this.item;\n"
       "    return len(got);\n"
       "  }\n"
       "}\n"},
      {"holdertest",
       "class HolderTest {\n"
       "  test method testRead() {\n"
       "    var h = new Holder(null);\n"
       "    var n = h.read();\n"
       "    assert n == 0;\n"
       "  }\n"
       "}\n"},
  };

  std::set<bench::OracleSpot> oracle = bench::oracle_candidates(bug);
  CHECK(oracle.count({"f_item_1", "holdertest", 3}) == 1);  // the store
  CHECK(oracle.count({"f_item_1", "holder", 4}) == 1);      // the read
  // The broken composition: the declaring file with the store's line.
  CHECK(oracle.count({"f_item_1", "holder", 3}) == 0);

  localizer::LocalizeOutput out =
      localizer::localize_sources(bug.id, bug.sources, {});
  CHECK(bench::prefilter_candidates(out) == oracle);
}

TEST_CASE("bug01 end to end: ground truth sits at rank two") {
  BugCase bug = bench::load_bug(kBug01Dir);
  localizer::LocalizeOutput out =
      localizer::localize_sources(bug.id, bug.sources, {});

  MatchResult r = bench::evaluate(out.report, bug, 10);
  CHECK(r.category == "matched");
  CHECK(r.examined == 2);
  CHECK(r.hits[0] == 0);
  CHECK(r.hits[1] == 1);
  REQUIRE(r.hit_kinds.size() == 1);
  CHECK(r.hit_kinds[0].first == "origin");
  CHECK(r.hit_kinds[0].second == "null_arg");
}

TEST_CASE("ranking predicates influence bug01 as designed") {
  const std::vector<std::string>& preds = bench::rank_predicates();
  REQUIRE(preds.size() == 5);
  CHECK(preds[0] == "is_null_return");
  CHECK(preds[4] == "arg_passing_method");

  BugCase bug = bench::load_bug(kBug01Dir);
  // Without the null-return rule the null literal loses its boost and
  // drops behind the preferred candidates.
  bench::Influence boost = bench::influence_of(bug, "is_null_return", 10);
  CHECK(boost.predicate == "is_null_return");
  CHECK(boost.label == "positive");
  // The only-stack-method rule is shadowed by the assigned-value rule
  // here: disabling it changes nothing.
  CHECK(bench::influence_of(bug, "only_target_method", 10).label == "none");
}
