#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "nullcause/logic/term.hpp"

namespace nullcause::logic {

// One Horn clause. Variables are numbered 0..num_vars-1 local to the clause;
// the solver renames them apart per activation.
struct Clause {
  TermPtr head;               // Atom (0-ary predicate) or Compound
  std::vector<TermPtr> body;  // conjunction, empty = fact
  int num_vars = 0;
  int source_line = 0;  // 1-based line of the clause start in its source text

  std::string pred_name() const;
  int pred_arity() const;
};

// Ordered clause store with a per-predicate index. Clause order is
// load order; solving tries clauses of a predicate strictly in that order.
class KnowledgeBase {
 public:
  void add_clause(Clause c);
  void add_fact(TermPtr head);

  const std::vector<Clause>& clauses() const { return clauses_; }
  bool has_predicate(const std::string& name, int arity) const;
  // Clause indices for name/arity in load order, or nullptr if undefined.
  const std::vector<int>* pred_clauses(const std::string& name, int arity) const;

 private:
  std::vector<Clause> clauses_;
  std::map<std::pair<std::string, int>, std::vector<int>> index_;
};

}  // namespace nullcause::logic
