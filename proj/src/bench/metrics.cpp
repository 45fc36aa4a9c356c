#include "nullcause/bench/metrics.hpp"

#include <algorithm>

namespace nullcause::bench {

MatchResult evaluate(const localizer::Report& report, const BugCase& bug,
                     int n) {
  n = std::min(n, 10);
  MatchResult r;
  r.bug_id = bug.id;
  r.in_scope = bug.in_scope;
  r.fault_locations = static_cast<int>(bug.fault_locations.size());

  // Rank of each fault location: the first candidate on that line.
  std::vector<int> found_ranks;
  for (const FaultLocation& loc : bug.fault_locations) {
    for (const localizer::RankedCause& c : report.candidates) {
      if (c.rank > n) break;
      if (c.cause.class_id == loc.class_id && c.cause.line == loc.line) {
        found_ranks.push_back(c.rank);
        r.hit_kinds.emplace_back(c.scheme, c.npe_type);
        break;
      }
    }
  }
  std::sort(found_ranks.begin(), found_ranks.end());

  for (int i = 1; i <= 10; ++i)
    r.hits[static_cast<std::size_t>(i - 1)] = static_cast<int>(
        std::count_if(found_ranks.begin(), found_ranks.end(),
                      [i](int rank) { return rank <= i; }));

  bool all = static_cast<int>(found_ranks.size()) == r.fault_locations;
  r.category = all                  ? "matched"
               : found_ranks.empty() ? "not_matched"
                                     : "partially_matched";
  r.examined = all ? found_ranks.back() : n;
  return r;
}

Aue aue(const std::vector<MatchResult>& results) {
  Aue a;
  for (const MatchResult& r : results) {
    if (r.category != "matched") continue;
    a.empty = false;
    a.num += r.examined - r.fault_locations;
    a.den += 1;
  }
  return a;
}

Summary summarize(const std::vector<MatchResult>& results) {
  Summary s;
  s.corpus_size = static_cast<int>(results.size());
  for (const MatchResult& r : results) {
    if (r.category == "matched") ++s.matched;
    if (r.category == "partially_matched") ++s.partially_matched;
    if (r.category == "not_matched") ++s.not_matched;
    for (int i = 0; i < 10; ++i)
      if (r.hits[static_cast<std::size_t>(i)] == r.fault_locations)
        ++s.matched_within[static_cast<std::size_t>(i)];
    for (const auto& [scheme, type] : r.hit_kinds) {
      ++s.scheme_counts[scheme];
      ++s.combo_counts[scheme + "/" + type];
    }
  }
  s.waste = aue(results);
  return s;
}

}  // namespace nullcause::bench
