#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nullcause::bench {

// One ground-truth fault location: the line a fix would touch.
struct FaultLocation {
  std::string class_id;
  int line = 0;
};

// One ground-truth cause: the exact code range of the expression whose null
// value is at fault.
struct CauseRange {
  std::string class_id;
  int start = 0;   // byte offset
  int length = 0;
};

// A seeded bug: program, the tests that expose it, and its ground truth.
struct BugCase {
  std::string id;
  std::string dir;
  std::vector<std::pair<std::string, std::string>> sources;  // class id, text
  std::vector<std::string> failing_tests;  // Class.method
  std::vector<FaultLocation> fault_locations;
  std::vector<CauseRange> causes;
  bool in_scope = true;
  std::string notes;
};

// A bug directory that does not hold what it promises: missing files, bad
// ground truth, tests that do not fail the way declared.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& msg)
      : std::runtime_error(msg) {}
};

// Loads and validates one bug directory (src/*.mnl + ground_truth.json).
// Checks that the declared failing tests are exactly the tests that fail
// with a null error, that fault lines exist, and that every cause range is
// the exact extent of one expression node.
BugCase load_bug(const std::string& dir);

// Loads every bug directory under `dir`, sorted by id.
std::vector<BugCase> load_corpus(const std::string& dir);

}  // namespace nullcause::bench
