#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nullcause/logic/kb.hpp"

namespace nullcause::rules {

// The rule file compiled into the binary (rules/npe.rules).
const char* embedded_rules_text();

// Every fact predicate the extractors can emit, with arity. Rule bodies may
// reference exactly these, the rule-defined predicates, and the engine's
// built-ins.
const std::vector<std::pair<std::string, int>>& fact_schema();

// A rule file failed validation: missing version pragma, a body goal that
// is neither defined nor a fact/built-in, or a head that shadows one.
struct LintError : std::runtime_error {
  explicit LintError(const std::string& msg) : std::runtime_error(msg) {}
};

// A parsed, validated rule set. Immutable; disabling a predicate produces a
// new rule set where that predicate always fails.
class RuleBase {
 public:
  static RuleBase from_text(const std::string& text);
  static RuleBase embedded();

  const std::string& version() const { return version_; }
  const std::vector<logic::Clause>& clauses() const { return clauses_; }

  // Head predicate names, in order of first definition.
  std::vector<std::string> predicates() const;
  bool defines(const std::string& predicate) const;

  // Replaces every clause of `predicate` with one that always fails.
  // Throws std::invalid_argument for a name this rule set does not define.
  RuleBase with_disabled(const std::string& predicate) const;

 private:
  RuleBase() = default;
  std::string version_;
  std::vector<logic::Clause> clauses_;
};

}  // namespace nullcause::rules
