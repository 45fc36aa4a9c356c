// nullcause: deduces likely root causes of null errors in Minil projects.
//
//   nullcause analyze --project DIR   localize one project's null failures
//   nullcause bench --corpus DIR      evaluate against a seeded-bug corpus
#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nullcause/bench/ablation.hpp"
#include "nullcause/bench/corpus.hpp"
#include "nullcause/bench/metrics.hpp"
#include "nullcause/bench/oracle.hpp"
#include "nullcause/localizer/config.hpp"
#include "nullcause/localizer/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace nullcause;

namespace {

constexpr int kOk = 0;
constexpr int kNoNpe = 1;
constexpr int kInputError = 2;

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out.is_open())
    throw std::runtime_error("cannot write " + path);
  out << content;
}

std::vector<std::string> split_csv(const std::string& csv) {
  std::vector<std::string> parts;
  std::istringstream in(csv);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) parts.push_back(item);
  return parts;
}

struct AnalyzeArgs {
  std::string project;
  std::string tests;
  int top = 0;
  std::string format = "json";
  std::string out;
  std::string emit_facts;
  std::string emit_probed;
  bool no_timings = false;
  std::string disable_rank_rule;
};

int run_analyze(const AnalyzeArgs& args, bool top_given) {
  fs::path project(args.project);
  localizer::Config config =
      localizer::load_config_file((project / "nullcause.toml").string());

  localizer::PipelineOptions options;
  options.tests = split_csv(args.tests);
  options.top = top_given ? args.top : config.top;
  options.step_limit = config.step_limit;
  options.depth_limit = config.depth_limit;
  options.want_trace = args.format == "trace";
  options.disable_rank_rule = args.disable_rank_rule;

  localizer::LocalizeOutput result = localizer::localize(args.project, options);

  if (!args.emit_facts.empty()) write_output(args.emit_facts, result.facts_text);
  if (!args.emit_probed.empty()) {
    fs::create_directories(args.emit_probed);
    for (const auto& [class_id, text] : result.probed_sources)
      write_output((fs::path(args.emit_probed) / (class_id + ".mnl")).string(),
                   text);
  }

  std::string rendered;
  if (args.format == "json")
    rendered = localizer::render_json(result.report, !args.no_timings);
  else if (args.format == "text")
    rendered = localizer::render_text(result.report, !args.no_timings);
  else
    rendered = localizer::render_trace(result, !args.no_timings);
  write_output(args.out, rendered);

  if (!result.probe_check.ok)
    std::cerr << "warning: instrumented run diverged: "
              << result.probe_check.detail << "\n";
  return result.no_npe ? kNoNpe : kOk;
}

struct BenchArgs {
  std::string corpus;
  int top = 10;
  std::string out;
};

ordered_json match_row(const bench::MatchResult& r) {
  ordered_json row;
  row["id"] = r.bug_id;
  row["in_scope"] = r.in_scope;
  row["category"] = r.category;
  row["fault_locations"] = r.fault_locations;
  row["examined"] = r.examined;
  row["hits"] = r.hits;
  ordered_json kinds = ordered_json::array();
  for (const auto& [scheme, type] : r.hit_kinds)
    kinds.push_back(scheme + "/" + type);
  row["hit_kinds"] = kinds;
  return row;
}

int run_bench(const BenchArgs& args) {
  std::vector<bench::BugCase> corpus = bench::load_corpus(args.corpus);

  std::vector<bench::MatchResult> results;
  int oracle_agreed = 0;
  int in_scope = 0;
  for (const bench::BugCase& bug : corpus) {
    localizer::PipelineOptions options;
    options.top = args.top;
    localizer::LocalizeOutput out =
        localizer::localize_sources(bug.id, bug.sources, options);
    results.push_back(bench::evaluate(out.report, bug, args.top));
    if (bug.in_scope) {
      ++in_scope;
      if (bench::prefilter_candidates(out) == bench::oracle_candidates(bug))
        ++oracle_agreed;
    }
  }
  bench::Summary summary = bench::summarize(results);
  std::vector<bench::Influence> influences =
      bench::rank_rule_influence(corpus, args.top);

  ordered_json doc;
  doc["corpus"] = fs::path(args.corpus).filename().string();
  doc["bugs"] = summary.corpus_size;
  doc["in_scope"] = in_scope;
  doc["categories"]["matched"] = summary.matched;
  doc["categories"]["partially_matched"] = summary.partially_matched;
  doc["categories"]["not_matched"] = summary.not_matched;
  doc["ratios"]["matched"] =
      summary.corpus_size ? 1.0 * summary.matched / summary.corpus_size : 0.0;
  doc["ratios"]["partially_matched"] =
      summary.corpus_size
          ? 1.0 * summary.partially_matched / summary.corpus_size
          : 0.0;
  doc["ratios"]["not_matched"] =
      summary.corpus_size ? 1.0 * summary.not_matched / summary.corpus_size
                          : 0.0;
  doc["matched_within_top"] = summary.matched_within;
  doc["oracle_agreement"]["in_scope"] = in_scope;
  doc["oracle_agreement"]["agreed"] = oracle_agreed;
  doc["unnecessary_examined"]["matched_bugs"] = summary.waste.den;
  doc["unnecessary_examined"]["extra_candidates"] = summary.waste.num;
  if (summary.waste.empty)
    doc["unnecessary_examined"]["average"] = nullptr;
  else
    doc["unnecessary_examined"]["average"] = summary.waste.value();
  doc["scheme_counts"] = summary.scheme_counts;
  doc["scheme_type_counts"] = summary.combo_counts;

  // Influence of each ranking predicate, bugs listed only when affected.
  ordered_json influence = ordered_json::array();
  for (const std::string& pred : bench::rank_predicates()) {
    ordered_json row;
    row["predicate"] = pred;
    ordered_json positive = ordered_json::array();
    ordered_json negative = ordered_json::array();
    for (const bench::Influence& inf : influences) {
      if (inf.predicate != pred) continue;
      if (inf.label == "positive") positive.push_back(inf.bug_id);
      if (inf.label == "negative") negative.push_back(inf.bug_id);
    }
    row["positive"] = positive;
    row["negative"] = negative;
    influence.push_back(row);
  }
  doc["rank_rule_influence"] = influence;

  ordered_json rows = ordered_json::array();
  for (const bench::MatchResult& r : results) rows.push_back(match_row(r));
  doc["results"] = rows;

  write_output(args.out, doc.dump(2) + "\n");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"null-error cause localizer for Minil projects"};
  app.require_subcommand(1);

  AnalyzeArgs analyze_args;
  CLI::App* analyze =
      app.add_subcommand("analyze", "localize a project's null failures");
  analyze->add_option("--project", analyze_args.project,
                      "project directory (src/*.mnl or *.mnl)")
      ->required();
  analyze->add_option("--tests", analyze_args.tests,
                      "comma-separated tests (method or Class.method)");
  CLI::Option* top_opt =
      analyze->add_option("--top", analyze_args.top,
                          "candidates to report (default from config, 10)")
          ->check(CLI::PositiveNumber);
  analyze->add_option("--format", analyze_args.format, "output format")
      ->check(CLI::IsMember({"json", "text", "trace"}));
  analyze->add_option("--out", analyze_args.out, "write the report here");
  analyze->add_option("--emit-facts", analyze_args.emit_facts,
                      "write extracted facts as clause text");
  analyze->add_option("--emit-probed", analyze_args.emit_probed,
                      "write instrumented sources into this directory");
  analyze->add_flag("--no-timings", analyze_args.no_timings,
                    "omit stage timings (byte-stable output)");
  analyze->add_option("--disable-rank-rule", analyze_args.disable_rank_rule,
                      "disable one ranking predicate");

  BenchArgs bench_args;
  CLI::App* bench_cmd =
      app.add_subcommand("bench", "evaluate against a seeded-bug corpus");
  bench_cmd->add_option("--corpus", bench_args.corpus, "corpus directory")
      ->required();
  bench_cmd->add_option("--top", bench_args.top, "candidate window")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--out", bench_args.out, "write the summary here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    if (*analyze) return run_analyze(analyze_args, top_opt->count() > 0);
    return run_bench(bench_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
}
