#pragma once

#include <string>
#include <vector>

#include "nullcause/bench/corpus.hpp"
#include "nullcause/bench/metrics.hpp"

namespace nullcause::bench {

// The ranking predicates the influence study toggles.
const std::vector<std::string>& rank_predicates();

// Effect of one ranking predicate on one bug's localization.
struct Influence {
  std::string bug_id;
  std::string predicate;
  // positive: the predicate helps (disabling it degrades the outcome);
  // negative: it hurts (disabling improves the outcome); none: no change.
  std::string label;
};

// Localizes `bug` once per configuration and compares outcomes. Quality is
// (category, examined): fewer candidates inspected is better within the
// same category.
Influence influence_of(const BugCase& bug, const std::string& predicate,
                       int top);

// The full cross product, bugs in corpus order, predicates in
// rank_predicates() order.
std::vector<Influence> rank_rule_influence(const std::vector<BugCase>& corpus,
                                           int top);

}  // namespace nullcause::bench
