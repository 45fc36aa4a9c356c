#include "nullcause/bench/ablation.hpp"

#include <tuple>

#include "nullcause/localizer/pipeline.hpp"

namespace nullcause::bench {

namespace {

int category_order(const std::string& c) {
  if (c == "matched") return 0;
  if (c == "partially_matched") return 1;
  return 2;
}

// Smaller is better: category first, then candidates inspected, then how
// deep the found locations sit.
std::tuple<int, int, int> quality(const MatchResult& r) {
  int depth = 0;
  for (int i = 0; i < 10; ++i)
    depth += r.fault_locations - r.hits[static_cast<std::size_t>(i)];
  return {category_order(r.category), r.examined, depth};
}

MatchResult run_once(const BugCase& bug, const std::string& disabled,
                     int top) {
  localizer::PipelineOptions opts;
  opts.top = top;
  opts.disable_rank_rule = disabled;
  localizer::LocalizeOutput out =
      localizer::localize_sources(bug.id, bug.sources, opts);
  return evaluate(out.report, bug, top);
}

}  // namespace

const std::vector<std::string>& rank_predicates() {
  static const std::vector<std::string> preds{
      "is_null_return", "val_assigned_in_method", "only_target_method",
      "from_test", "arg_passing_method"};
  return preds;
}

Influence compare(const BugCase& bug, const MatchResult& with,
                  const std::string& predicate, int top) {
  MatchResult without = run_once(bug, predicate, top);
  Influence inf{bug.id, predicate, "none"};
  auto q_with = quality(with);
  auto q_without = quality(without);
  if (q_without > q_with) inf.label = "positive";
  if (q_without < q_with) inf.label = "negative";
  return inf;
}

Influence influence_of(const BugCase& bug, const std::string& predicate,
                       int top) {
  return compare(bug, run_once(bug, "", top), predicate, top);
}

std::vector<Influence> rank_rule_influence(const std::vector<BugCase>& corpus,
                                           int top) {
  std::vector<Influence> out;
  for (const BugCase& bug : corpus) {
    MatchResult with = run_once(bug, "", top);
    for (const std::string& pred : rank_predicates())
      out.push_back(compare(bug, with, pred, top));
  }
  return out;
}

}  // namespace nullcause::bench
