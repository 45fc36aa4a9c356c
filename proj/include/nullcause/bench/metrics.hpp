#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "nullcause/bench/corpus.hpp"
#include "nullcause/localizer/report.hpp"

namespace nullcause::bench {

// How one bug's report compares to its ground truth within the Top-N.
struct MatchResult {
  std::string bug_id;
  bool in_scope = true;
  std::string category;  // matched | partially_matched | not_matched
  int fault_locations = 0;
  // hits[n-1] = ground-truth locations found within the top n candidates.
  std::array<int, 10> hits{};
  // Candidates inspected until every fault location was seen; N when the
  // bug is not fully matched.
  int examined = 0;
  // For each fault location found (rank order): how the hitting candidate
  // was deduced and what kind of error it explains.
  std::vector<std::pair<std::string, std::string>> hit_kinds;  // scheme, type
};

// Compares the report's candidate locations with the bug's fault locations,
// considering only the top `n` candidates (n <= 10).
MatchResult evaluate(const localizer::Report& report, const BugCase& bug,
                     int n);

// Average number of unnecessarily examined candidates, over matched bugs
// only, as an exact fraction.
struct Aue {
  bool empty = true;     // no matched bugs
  long long num = 0;     // sum of (examined - fault_locations)
  long long den = 0;     // matched bugs
  double value() const { return empty ? 0.0 : static_cast<double>(num) / den; }
};

Aue aue(const std::vector<MatchResult>& results);

struct Summary {
  int corpus_size = 0;
  int matched = 0;
  int partially_matched = 0;
  int not_matched = 0;
  // bugs whose every fault location is within the top n, for n = 1..10.
  std::array<int, 10> matched_within{};
  Aue waste;
  // identified fault locations per deduction scheme / per scheme-and-type.
  std::map<std::string, int> scheme_counts;
  std::map<std::string, int> combo_counts;  // "scheme/type"
};

Summary summarize(const std::vector<MatchResult>& results);

}  // namespace nullcause::bench
