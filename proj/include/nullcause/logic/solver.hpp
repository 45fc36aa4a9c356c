#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nullcause/logic/kb.hpp"
#include "nullcause/logic/parse.hpp"
#include "nullcause/logic/term.hpp"

namespace nullcause::logic {

// A goal names a predicate that is neither defined nor built in. Distinct
// from failure so schema typos stay detectable; callers that want Prolog's
// "false" answer catch this and report no solutions.
struct UnknownPredicate : std::runtime_error {
  UnknownPredicate(const std::string& name, int arity);
  std::string predicate;
  int arity;
};

// Resolution exceeded the frame depth limit.
struct DepthExceeded : std::runtime_error {
  explicit DepthExceeded(long long limit);
};

// Engine misuse: unbound variable used as a goal, non-integer comparison.
struct EngineError : std::runtime_error {
  explicit EngineError(const std::string& msg);
};

struct TraceEvent {
  enum class Kind { Call, Exit, Redo, Fail, Cut };
  Kind kind;
  std::string goal;        // rendered under the bindings at event time
  int clause_index = -1;   // global index into KnowledgeBase::clauses()
  int clause_ordinal = 0;  // 1-based position within the goal's predicate
  int source_line = 0;     // source line of that clause
  int depth = 0;
  int pruned = 0;          // Cut events: alternatives discarded for the call
};

using DeductionTrace = std::vector<TraceEvent>;

struct Solution {
  // bindings[i] = fully resolved term for query variable i; var_names matches
  // Query::var_names. Unbound variables resolve to themselves.
  std::vector<TermPtr> bindings;
  std::vector<std::string> var_names;
  // Which clause of the query's predicate produced this solution (1-based
  // load order), when the query is a single user-predicate goal; 0 otherwise.
  int top_clause_ordinal = 0;
  int top_clause_index = -1;
};

struct SolveOptions {
  long long depth_limit = 100000;  // predicate-call frames on one path
  DeductionTrace* trace = nullptr;
};

// Depth-first SLD resolution: clauses top to bottom, sub-goals left to
// right, chronological backtracking, cut scoped to the clause and the
// predicate call containing it. Built-ins: findall/3, member/2, =, ==, \==,
// =< and < (integer), \+, !, true, fail, and runtime ','/';' goals.
//
// The search runs on a dedicated big-stack thread so that hitting the
// configured depth limit is always reported as DepthExceeded rather than
// exhausting the host stack; solve() itself stays synchronous.
class Engine {
 public:
  explicit Engine(const KnowledgeBase& kb, SolveOptions opts = {});

  // Calls on_solution per solution in order; stop by returning false.
  void solve(const Query& q,
             const std::function<bool(const Solution&)>& on_solution) const;

  std::vector<Solution> solve_all(const Query& q,
                                  std::size_t limit = SIZE_MAX) const;

 private:
  const KnowledgeBase& kb_;
  SolveOptions opts_;
};

std::vector<Solution> solve(const KnowledgeBase& kb, const Query& q);

std::pair<std::vector<Solution>, DeductionTrace> trace_solve(
    const KnowledgeBase& kb, const Query& q);

}  // namespace nullcause::logic
