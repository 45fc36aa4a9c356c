#pragma once

#include <vector>

#include "nullcause/localizer/report.hpp"
#include "nullcause/rules/query.hpp"

namespace nullcause::localizer {

// One cause candidate in deduction order, enriched with its evidence path
// and the failure it explains, plus its ranking status.
struct CandidateInfo {
  Supporter supporter;
  Spot cause;
  std::string scheme;
  std::string npe_type;
  rules::RankStatus status = rules::RankStatus::Neutral;
  std::vector<Hop> evidence;
};

// Deduction order in, ranked report candidates out:
//   - filtered candidates are dropped;
//   - duplicates collapse on (cause entity, class, line), the first
//     occurrence keeping its scheme/type/evidence and collecting every
//     occurrence's supporter (and any new evidence hops);
//   - preferred candidates move ahead of neutral ones, otherwise the
//     deduction order is preserved (stable partition);
//   - ranks are dense from 1.
// `code` is left empty; the pipeline fills it in.
std::vector<RankedCause> dedup_and_rank(const std::vector<CandidateInfo>& in);

}  // namespace nullcause::localizer
