#include <algorithm>
#include <map>
#include <set>

#include "nullcause/logic/parse.hpp"
#include "nullcause/logic/term.hpp"
#include "nullcause/rules/rulebase.hpp"

namespace nullcause::rules {

using logic::Clause;
using logic::Term;
using logic::TermKind;
using logic::TermPtr;

const std::vector<std::pair<std::string, int>>& fact_schema() {
  static const std::vector<std::pair<std::string, int>> schema = {
      {"method_invoc", 3}, {"argument", 3},
      {"receiver", 3},     {"ref", 3},
      {"assign", 3},       {"return", 3},
      {"param", 3},        {"param_line", 2},
      {"literal", 3},      {"field_of", 2},
      {"method_of", 2},    {"method_range", 4},
      {"builtin", 1},      {"test_method", 1},
      {"single_stmt_return_call", 1},
      {"class", 2},        {"expr", 6},
      {"name", 6},         {"val", 3},
      {"npe_error", 4},    {"stack", 4},
      {"failed_test", 1},
  };
  return schema;
}

namespace {

bool is_builtin(const std::string& name, int arity) {
  static const std::set<std::pair<std::string, int>> builtins = {
      {"findall", 3}, {"member", 2}, {"=", 2},   {"==", 2}, {"\\==", 2},
      {"=<", 2},      {"<", 2},      {"true", 0}, {"fail", 0}, {"!", 0},
      {"\\+", 1},     {",", 2},      {";", 2},
  };
  return builtins.count({name, arity}) > 0;
}

bool in_schema(const std::string& name, int arity) {
  for (const auto& [n, a] : fact_schema())
    if (n == name && a == arity) return true;
  return false;
}

std::pair<std::string, int> goal_sig(const TermPtr& g) {
  if (g->kind == TermKind::Atom) return {g->text, 0};
  if (g->kind == TermKind::Compound)
    return {g->text, static_cast<int>(g->args.size())};
  return {"", -1};
}

void check_goal(const TermPtr& g,
                const std::set<std::pair<std::string, int>>& heads,
                int line) {
  auto [name, arity] = goal_sig(g);
  if (arity < 0)
    throw LintError("line " + std::to_string(line) +
                    ": a goal must be a predicate, not a variable or number");
  if ((name == "," || name == ";") && arity == 2) {
    check_goal(g->args[0], heads, line);
    check_goal(g->args[1], heads, line);
    return;
  }
  if (name == "\\+" && arity == 1) {
    check_goal(g->args[0], heads, line);
    return;
  }
  if (name == "findall" && arity == 3) {
    check_goal(g->args[1], heads, line);
    return;
  }
  if (is_builtin(name, arity)) return;
  if (in_schema(name, arity)) return;
  if (heads.count({name, arity})) return;
  throw LintError("line " + std::to_string(line) + ": '" + name + "/" +
                  std::to_string(arity) +
                  "' is neither defined here, a fact, nor built in");
}

std::string find_version(const std::string& text) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(pos, end - pos);
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first != std::string::npos) {
      static const std::string kPrefix = "% version: ";
      if (line.compare(first, kPrefix.size(), kPrefix) == 0) {
        std::string v = line.substr(first + kPrefix.size());
        while (!v.empty() && (v.back() == ' ' || v.back() == '\r'))
          v.pop_back();
        return v;
      }
      return "";  // first meaningful line is not the pragma
    }
    pos = end + 1;
  }
  return "";
}

}  // namespace

RuleBase RuleBase::from_text(const std::string& text) {
  RuleBase rb;
  rb.version_ = find_version(text);
  if (rb.version_.empty())
    throw LintError(
        "rule text must start with a '% version: <id>' pragma");
  rb.clauses_ = logic::parse_clauses(text);

  std::set<std::pair<std::string, int>> heads;
  for (const Clause& c : rb.clauses_) {
    auto sig = std::make_pair(c.pred_name(), c.pred_arity());
    if (is_builtin(sig.first, sig.second))
      throw LintError("line " + std::to_string(c.source_line) + ": '" +
                      sig.first + "/" + std::to_string(sig.second) +
                      "' would shadow a built-in");
    if (in_schema(sig.first, sig.second))
      throw LintError("line " + std::to_string(c.source_line) + ": '" +
                      sig.first + "/" + std::to_string(sig.second) +
                      "' would shadow a fact predicate");
    heads.insert(sig);
  }
  for (const Clause& c : rb.clauses_)
    for (const TermPtr& g : c.body) check_goal(g, heads, c.source_line);
  return rb;
}

RuleBase RuleBase::embedded() { return from_text(embedded_rules_text()); }

std::vector<std::string> RuleBase::predicates() const {
  std::vector<std::string> out;
  for (const Clause& c : clauses_)
    if (std::find(out.begin(), out.end(), c.pred_name()) == out.end())
      out.push_back(c.pred_name());
  return out;
}

bool RuleBase::defines(const std::string& predicate) const {
  for (const Clause& c : clauses_)
    if (c.pred_name() == predicate) return true;
  return false;
}

RuleBase RuleBase::with_disabled(const std::string& predicate) const {
  if (!defines(predicate))
    throw std::invalid_argument("no rule predicate named '" + predicate +
                                "'");
  RuleBase rb;
  rb.version_ = version_ + " (disabled: " + predicate + ")";
  bool stubbed = false;
  for (const Clause& c : clauses_) {
    if (c.pred_name() != predicate) {
      rb.clauses_.push_back(c);
      continue;
    }
    if (stubbed) continue;
    stubbed = true;
    Clause stub;
    std::vector<TermPtr> args;
    for (int i = 0; i < c.pred_arity(); ++i)
      args.push_back(logic::mk_var(i, "_"));
    stub.head = args.empty() ? logic::mk_atom(predicate)
                             : logic::mk_compound(predicate, args);
    stub.body.push_back(logic::mk_atom("fail"));
    stub.num_vars = c.pred_arity();
    stub.source_line = c.source_line;
    rb.clauses_.push_back(stub);
  }
  return rb;
}

}  // namespace nullcause::rules
