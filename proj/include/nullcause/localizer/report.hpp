#pragma once

#include <string>
#include <vector>

namespace nullcause::localizer {

// A place in the analyzed program, as reports print it.
struct Spot {
  std::string entity;  // atom, e.g. v_item_1 or expr4
  std::string class_id;
  int line = 0;

  friend bool operator==(const Spot& a, const Spot& b) {
    return a.entity == b.entity && a.class_id == b.class_id &&
           a.line == b.line;
  }
};

// One null-carrying copy step on the evidence path: `to` took its value
// from `from`.
struct Hop {
  Spot to;
  Spot from;

  friend bool operator==(const Hop& a, const Hop& b) {
    return a.to == b.to && a.from == b.from;
  }
};

// A failing check this cause explains: the test and the expression that
// was null in it.
struct Supporter {
  std::string test;  // t_ atom
  Spot expr;

  friend bool operator==(const Supporter& a, const Supporter& b) {
    return a.test == b.test && a.expr == b.expr;
  }
};

// One ranked root-cause proposal.
struct RankedCause {
  int rank = 0;            // dense, from 1
  Spot cause;              // the entity and where it went wrong
  std::string code;        // source text at the cause
  std::string scheme;      // direct | origin | transfer
  std::string npe_type;    // null_arg | null_ref
  std::string status;      // preferred | neutral
  std::vector<Supporter> supporters;
  std::vector<Hop> evidence;  // error-to-cause path; empty for direct
};

struct FailingTest {
  std::string id;       // t_ atom
  std::string name;     // Class.method
  std::string failure;  // formatted failure from the original run
};

struct StageTiming {
  std::string stage;
  double millis = 0.0;
};

// The analysis result, ready to render. Deterministic for identical inputs
// except for the timing numbers.
struct Report {
  std::string project;
  std::string rule_version;
  std::string notice;  // "" or "no NPE detected"
  std::vector<FailingTest> tests;
  std::vector<RankedCause> candidates;
  std::vector<StageTiming> timings;
};

// json follows docs/report-schema.md; text is a human-readable table; the
// trace format is rendered by the pipeline, which holds the deduction log.
std::string render_json(const Report& report, bool with_timings);
std::string render_text(const Report& report, bool with_timings);

}  // namespace nullcause::localizer
