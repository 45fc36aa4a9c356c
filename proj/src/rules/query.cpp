#include "nullcause/rules/query.hpp"

namespace nullcause::rules {

using logic::mk_atom;
using logic::mk_compound;
using logic::mk_tuple;
using logic::mk_var;
using logic::Query;
using logic::Solution;
using logic::TermKind;
using logic::TermPtr;

logic::KnowledgeBase assemble_kb(const std::vector<TermPtr>& facts,
                                 const RuleBase& rules) {
  logic::KnowledgeBase kb;
  for (const TermPtr& f : facts) kb.add_fact(f);
  for (const auto& [name, arity] : fact_schema()) {
    if (kb.has_predicate(name, arity)) continue;
    logic::Clause stub;
    std::vector<TermPtr> args;
    for (int i = 0; i < arity; ++i) args.push_back(mk_var(i, "_"));
    stub.head = args.empty() ? mk_atom(name) : mk_compound(name, args);
    stub.body.push_back(mk_atom("fail"));
    stub.num_vars = arity;
    kb.add_clause(std::move(stub));
  }
  for (const logic::Clause& c : rules.clauses()) kb.add_clause(c);
  return kb;
}

namespace {

// cause_of's clauses, in order: which flavor of error and which derivation
// scheme each one realizes.
struct SchemeType {
  const char* npe_type;
  const char* scheme;
};
constexpr SchemeType kByOrdinal[] = {
    {"null_arg", "direct"},   {"null_arg", "origin"},
    {"null_ref", "direct"},   {"null_ref", "origin"},
    {"null_arg", "transfer"}, {"null_ref", "transfer"},
};

std::string atom_text(const TermPtr& t) {
  return t && t->kind == TermKind::Atom ? t->text : logic::to_string(t);
}

}  // namespace

std::vector<Candidate> query_causes(const logic::KnowledgeBase& kb) {
  logic::Engine engine(kb);

  Query errors;
  errors.goal = mk_compound(
      "npe_error", {mk_var(0, "T"), mk_var(1, "E"), mk_var(2, "L"),
                    mk_var(3, "K")});
  errors.num_vars = 4;
  errors.var_names = {"T", "E", "L", "K"};

  std::vector<Candidate> out;
  for (const Solution& err : engine.solve_all(errors)) {
    std::string test = atom_text(err.bindings[0]);
    std::string expr = atom_text(err.bindings[1]);
    TermPtr line = err.bindings[2];

    Query causes;
    causes.goal = mk_compound(
        "cause_of", {mk_compound("npe", {mk_atom(expr), line}),
                     mk_var(0, "Cause"), mk_var(1, "Loc")});
    causes.num_vars = 2;
    causes.var_names = {"Cause", "Loc"};

    for (const Solution& s : engine.solve_all(causes)) {
      int ordinal = s.top_clause_ordinal;
      if (ordinal < 1 || ordinal > 6) continue;
      Candidate c;
      c.test = test;
      c.expr = expr;
      c.line = line;
      c.cause = atom_text(s.bindings[0]);
      c.loc = s.bindings[1];
      c.npe_type = kByOrdinal[ordinal - 1].npe_type;
      c.scheme = kByOrdinal[ordinal - 1].scheme;
      out.push_back(std::move(c));
    }
  }
  return out;
}

const char* rank_status_name(RankStatus s) {
  switch (s) {
    case RankStatus::Filtered: return "filtered";
    case RankStatus::Preferred: return "preferred";
    case RankStatus::Neutral: return "neutral";
  }
  return "neutral";
}

RankStatus rank_status(const logic::KnowledgeBase& kb, const Candidate& c) {
  logic::Engine engine(kb);
  TermPtr tuple = mk_tuple(
      {mk_atom(c.test), mk_atom(c.expr), mk_atom(c.cause), c.loc});
  auto holds = [&](const char* pred) {
    Query q;
    q.goal = mk_compound(pred, {tuple});
    return !engine.solve_all(q, 1).empty();
  };
  if (holds("filter_cond")) return RankStatus::Filtered;
  if (holds("prefer_cond")) return RankStatus::Preferred;
  return RankStatus::Neutral;
}

std::vector<FlowEdge> null_flow_edges(const logic::KnowledgeBase& kb) {
  logic::Engine engine(kb);
  Query q;
  // findall copies each edge out with the bindings it was derived under.
  q.goal = mk_compound(
      "findall",
      {mk_compound("edge", {mk_var(1, "A"), mk_var(2, "B")}),
       mk_compound("null_pred", {mk_var(1, "A"), mk_var(2, "B")}),
       mk_var(0, "Out")});
  q.num_vars = 3;
  q.var_names = {"Out", "A", "B"};

  std::vector<FlowEdge> edges;
  auto solutions = engine.solve_all(q, 1);
  if (solutions.empty()) return edges;

  TermPtr list = solutions[0].bindings[0];
  while (list && list->kind == TermKind::Compound && list->text == "." &&
         list->args.size() == 2) {
    const TermPtr& e = list->args[0];
    list = list->args[1];
    if (!e || e->kind != TermKind::Compound || e->args.size() != 2) continue;
    const TermPtr& to = e->args[0];
    const TermPtr& from = e->args[1];
    if (to->args.size() != 2 || from->args.size() != 2) continue;
    edges.push_back(FlowEdge{atom_text(to->args[0]), to->args[1],
                             atom_text(from->args[0]), from->args[1]});
  }
  return edges;
}

}  // namespace nullcause::rules
