#pragma once

#include <set>
#include <string>
#include <tuple>

#include "nullcause/bench/corpus.hpp"
#include "nullcause/localizer/pipeline.hpp"

namespace nullcause::bench {

// An entity at a line, the currency both the oracle and the localizer's
// candidates trade in.
using OracleSpot = std::tuple<std::string, std::string, int>;

// Brute-force null-flow closure, computed without the deduction rules: each
// failing test runs under an interpreter tap that records every value copy
// (variable and field stores, parameter bindings, call returns, reads of a
// stored value) together with actual nullness; the result is everything
// backwards-reachable from the test's null-erring expression along
// null-carrying copies, plus that expression itself.
std::set<OracleSpot> oracle_candidates(const BugCase& bug);

// The localizer's candidate set before ranking drops or reorders anything:
// every deduced (cause, loc), deduplicated.
std::set<OracleSpot> prefilter_candidates(const localizer::LocalizeOutput& out);

}  // namespace nullcause::bench
