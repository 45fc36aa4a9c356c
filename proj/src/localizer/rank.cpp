#include "nullcause/localizer/rank.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace nullcause::localizer {

std::vector<RankedCause> dedup_and_rank(const std::vector<CandidateInfo>& in) {
  using Key = std::tuple<std::string, std::string, int>;
  std::vector<RankedCause> merged;
  std::map<Key, std::size_t> index_of;

  for (const CandidateInfo& c : in) {
    if (c.status == rules::RankStatus::Filtered) continue;
    Key key{c.cause.entity, c.cause.class_id, c.cause.line};
    auto it = index_of.find(key);
    if (it == index_of.end()) {
      RankedCause rc;
      rc.cause = c.cause;
      rc.scheme = c.scheme;
      rc.npe_type = c.npe_type;
      rc.status = rules::rank_status_name(c.status);
      rc.supporters.push_back(c.supporter);
      rc.evidence = c.evidence;
      index_of.emplace(key, merged.size());
      merged.push_back(std::move(rc));
      continue;
    }
    RankedCause& rc = merged[it->second];
    if (std::find(rc.supporters.begin(), rc.supporters.end(), c.supporter) ==
        rc.supporters.end())
      rc.supporters.push_back(c.supporter);
    for (const Hop& hop : c.evidence)
      if (std::find(rc.evidence.begin(), rc.evidence.end(), hop) ==
          rc.evidence.end())
        rc.evidence.push_back(hop);
  }

  std::stable_partition(merged.begin(), merged.end(),
                        [](const RankedCause& rc) {
                          return rc.status == "preferred";
                        });
  for (std::size_t i = 0; i < merged.size(); ++i)
    merged[i].rank = static_cast<int>(i) + 1;
  return merged;
}

}  // namespace nullcause::localizer
