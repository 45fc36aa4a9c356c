#include "nullcause/logic/kb.hpp"

namespace nullcause::logic {

std::string Clause::pred_name() const { return head->text; }

int Clause::pred_arity() const {
  return head->kind == TermKind::Compound ? static_cast<int>(head->args.size())
                                          : 0;
}

void KnowledgeBase::add_clause(Clause c) {
  int idx = static_cast<int>(clauses_.size());
  index_[{c.pred_name(), c.pred_arity()}].push_back(idx);
  clauses_.push_back(std::move(c));
}

void KnowledgeBase::add_fact(TermPtr head) {
  Clause c;
  c.head = std::move(head);
  add_clause(std::move(c));
}

bool KnowledgeBase::has_predicate(const std::string& name, int arity) const {
  return index_.count({name, arity}) > 0;
}

const std::vector<int>* KnowledgeBase::pred_clauses(const std::string& name,
                                                    int arity) const {
  auto it = index_.find({name, arity});
  if (it == index_.end()) return nullptr;
  return &it->second;
}

}  // namespace nullcause::logic
