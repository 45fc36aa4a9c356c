#include "nullcause/runtime/interp.hpp"

namespace nullcause::runtime {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Passed: return "passed";
    case Verdict::Npe: return "npe";
    case Verdict::AssertFail: return "assert_fail";
    case Verdict::OtherError: return "other_error";
  }
  return "?";
}

const char* npe_kind_name(NpeKind k) {
  switch (k) {
    case NpeKind::Deref: return "deref";
    case NpeKind::Operator: return "operator";
    case NpeKind::BuiltinArg: return "builtin_arg";
  }
  return "?";
}

std::string format_failure(const TestOutcome& outcome) {
  std::string head;
  switch (outcome.verdict) {
    case Verdict::Passed:
      return "";
    case Verdict::Npe:
      head = "NullPointerException: \"" + outcome.npe->expr_text +
             "\" is null";
      break;
    case Verdict::AssertFail:
      head = "AssertionError";
      break;
    case Verdict::OtherError:
      head = outcome.error_text;
      break;
  }
  for (const StackFrame& f : outcome.stack)
    head += "\n  at " + f.class_name + "." + f.method_name + "(" +
            f.class_id + ":" + std::to_string(f.line) + ")";
  return head;
}

}  // namespace nullcause::runtime
