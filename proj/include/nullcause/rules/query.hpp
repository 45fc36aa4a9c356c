#pragma once

#include <string>
#include <vector>

#include "nullcause/logic/solver.hpp"
#include "nullcause/rules/rulebase.hpp"

namespace nullcause::rules {

// One proposed root cause for one recorded null error.
struct Candidate {
  std::string test;      // failing test whose error this explains
  std::string expr;      // entity the error blamed
  logic::TermPtr line;   // line(ClassId, L) of the error
  std::string cause;     // proposed root-cause entity
  logic::TermPtr loc;    // line(ClassId, L) where it went wrong
  std::string scheme;    // direct | origin | transfer
  std::string npe_type;  // null_arg | null_ref
};

// Builds the knowledge base: facts first (in the order given), then the
// rules. Fact predicates with no facts get an always-failing definition so
// queries see an empty relation instead of an unknown predicate.
logic::KnowledgeBase assemble_kb(const std::vector<logic::TermPtr>& facts,
                                 const RuleBase& rules);

// All cause candidates for every recorded null error, in deduction order:
// errors in fact order; per error, the erring expression first, then the
// traced origin, then the transfer chain nearest-first.
std::vector<Candidate> query_causes(const logic::KnowledgeBase& kb);

enum class RankStatus { Filtered, Preferred, Neutral };
const char* rank_status_name(RankStatus s);

// Evaluates the ranking conditions on the candidate's (Test, Expr, Cause,
// Loc) tuple: filtered beats preferred beats neutral.
RankStatus rank_status(const logic::KnowledgeBase& kb, const Candidate& c);

// One null-carrying copy step: `to` took its null from `from`.
struct FlowEdge {
  std::string to_entity;
  logic::TermPtr to_loc;
  std::string from_entity;
  logic::TermPtr from_loc;
};

// Every null-carrying copy edge derivable from the knowledge base, in
// deduction order. The localizer threads evidence chains out of these.
std::vector<FlowEdge> null_flow_edges(const logic::KnowledgeBase& kb);

}  // namespace nullcause::rules
