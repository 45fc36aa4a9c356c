#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "nullcause/runtime/program.hpp"

namespace nullcause::runtime {

enum class Verdict { Passed, Npe, AssertFail, OtherError };

const char* verdict_name(Verdict v);

// What kind of null use raised an NPE.
enum class NpeKind { Deref, Operator, BuiltinArg };

const char* npe_kind_name(NpeKind k);

struct NpeInfo {
  std::string class_id;  // unit of the blamed expression
  int node = -1;         // blamed expression node id
  int line = 0;
  NpeKind kind = NpeKind::Deref;
  std::string expr_text;  // exact source text of the blamed expression
};

struct StackFrame {
  std::string class_name;
  std::string method_name;
  std::string class_id;
  int line = 0;
};

// One probe variable initialization observed on a breakpoint line.
struct ProbeRecord {
  std::string class_id;
  int line = 0;
  std::string name;  // the probe variable, e.g. v_item_1_line_9
  bool is_null = false;
};

struct TestOutcome {
  std::string class_name;
  std::string method_name;
  Verdict verdict = Verdict::Passed;
  std::optional<NpeInfo> npe;         // set iff verdict == Npe
  std::string error_text;             // OtherError: what went wrong
  std::vector<StackFrame> stack;      // innermost first; empty iff Passed
  std::set<std::pair<std::string, int>> covered;  // (class id, line)
  std::vector<ProbeRecord> probes;
};

// A local, parameter, or field cell. Locals and parameters are identified by
// their declaring node plus the activation frame; fields by their FieldDecl
// plus the owning object.
struct SlotRef {
  const minil::CompilationUnit* unit = nullptr;  // unit of the declaration
  int decl = -1;
  long long object = -1;  // -1 for locals and parameters
  long long frame = -1;   // -1 for fields
  int line = 0;  // line the store took effect on
  // Unit `line` belongs to. Differs from `unit` when a constructor argument
  // initializes a field from another file.
  const minil::CompilationUnit* site = nullptr;
};

// An evaluated expression occurrence.
struct EvalRef {
  const minil::CompilationUnit* unit = nullptr;
  int node = -1;
  int line = 0;
};

// Tap on the interpreter used by the evaluation oracle: every value copy and
// every name/field read is reported, with nullness. All hooks default to
// no-ops.
struct ExecutionObserver {
  virtual ~ExecutionObserver() = default;
  // src's value was copied into slot (var init, assignment, field write,
  // constructor field init, parameter binding).
  virtual void stored(const SlotRef& slot, const EvalRef& src, bool is_null) {
    (void)slot, (void)src, (void)is_null;
  }
  // A name or field access read the value currently held by slot.
  virtual void loaded(const EvalRef& use, const SlotRef& slot, bool is_null) {
    (void)use, (void)slot, (void)is_null;
  }
  // A call completed; its result came from expression ret (null for a bare
  // `return;` or falling off the end, in which case the value is null).
  virtual void returned(const EvalRef& call, const EvalRef* ret,
                        bool is_null) {
    (void)call, (void)ret, (void)is_null;
  }
};

struct RunOptions {
  // Method names (or Class.method) to run; empty means every test.
  std::vector<std::string> test_filter;
  // When set, VarDecl initializations of probe variables (`<x>_line_<L>` on
  // line L) on breakpoint lines are recorded in TestOutcome::probes.
  bool probe_mode = false;
  std::map<std::string, std::set<int>> breakpoints;  // class id -> lines
  long long step_limit = 1000000;
  int max_call_depth = 512;
  ExecutionObserver* observer = nullptr;
};

// A breakpoint outside the program, an unknown test in the filter.
struct RuntimeConfigError : std::runtime_error {
  explicit RuntimeConfigError(const std::string& msg)
      : std::runtime_error(msg) {}
};

// Runs the program's test methods sequentially, each on a fresh heap. A
// test stops at its first failure; later tests still run.
std::vector<TestOutcome> run_tests(const Program& program,
                                   const RunOptions& options = {});

// Renders a failed outcome the way the test runner prints it:
//   NullPointerException: "item" is null
//     at Repo.size(repo:9)
//     at RepoTest.testSize(repo:15)
// Assertion failures print "AssertionError"; other errors print their text.
// Returns "" for a passed outcome.
std::string format_failure(const TestOutcome& outcome);

}  // namespace nullcause::runtime
