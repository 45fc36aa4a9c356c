#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nullcause/localizer/rank.hpp"
#include "nullcause/localizer/report.hpp"
#include "nullcause/logic/solver.hpp"

namespace nullcause::localizer {

struct PipelineOptions {
  // Tests to run: "method" or "Class.method"; empty means all of them.
  std::vector<std::string> tests;
  int top = 10;
  long long step_limit = 1000000;
  long long depth_limit = 100000;
  // Record the deduction log for the trace format (costs a second query).
  bool want_trace = false;
  // Name of a ranking predicate to disable, for influence studies.
  std::string disable_rank_rule;
};

// A pipeline stage failed. `stage` is one of coverage, static, dynamic,
// fault_localizer (or input for project loading).
struct PipelineError : std::runtime_error {
  PipelineError(std::string stage_, const std::string& msg)
      : std::runtime_error(stage_ + ": " + msg), stage(std::move(stage_)) {}
  std::string stage;
};

// Original-versus-probed failure comparison: the instrumented program must
// fail exactly like the original, probe variable renamings aside.
struct ProbeCheck {
  bool ok = true;
  std::string detail;  // first difference found
};

// The deduction log for one recorded null error, for the trace format.
struct TraceSection {
  std::string header;  // the error being explained
  logic::DeductionTrace events;
};

struct LocalizeOutput {
  Report report;
  bool no_npe = false;  // no test failed with a null error
  // Every candidate in deduction order with its status, including the
  // filtered ones the report drops.
  std::vector<CandidateInfo> raw_candidates;
  std::string facts_text;  // all facts as clause text (--emit-facts)
  std::map<std::string, std::string> probed_sources;  // (--emit-probed)
  ProbeCheck probe_check;
  std::vector<TraceSection> trace;  // filled when want_trace
};

// Runs the full pipeline on in-memory sources: coverage run, fact
// extraction, probe injection, probed run, deduction, ranking.
LocalizeOutput localize_sources(
    const std::string& project_id,
    const std::vector<std::pair<std::string, std::string>>& sources,
    const PipelineOptions& options);

// Loads `dir`/src/*.mnl (or `dir`/*.mnl) and localizes. The unit's class id
// is the file stem; the project id is the directory name.
LocalizeOutput localize(const std::string& dir, const PipelineOptions& options);

// The trace format: deduction log, every candidate with its status and the
// cause clause that produced it, then the final ranking.
std::string render_trace(const LocalizeOutput& out, bool with_timings);

}  // namespace nullcause::localizer
