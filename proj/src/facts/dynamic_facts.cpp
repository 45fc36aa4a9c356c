#include <algorithm>
#include <set>
#include <tuple>

#include "nullcause/facts/dynamic_facts.hpp"

namespace nullcause::facts {

using logic::mk_atom;
using logic::mk_compound;
using logic::mk_int;
using logic::TermPtr;
using runtime::TestOutcome;

namespace {

TermPtr line_term(const std::string& class_id, int line) {
  return mk_compound("line", {mk_atom(class_id), mk_int(line)});
}

class Collector {
 public:
  Collector(const runtime::Program& p, const AtomTable& atoms,
            const ProbedProgram& probed,
            const std::vector<TestOutcome>& outcomes)
      : p_(p), atoms_(atoms), probed_(probed), outcomes_(outcomes) {}

  DynamicFacts run() {
    collect_vals();
    for (const TestOutcome& t : outcomes_) {
      if (t.verdict == runtime::Verdict::Passed) continue;
      std::string test = test_atom(t);
      if (test.empty()) continue;
      out_.facts.facts.push_back(
          mk_compound("failed_test", {mk_atom(test)}));
      if (t.verdict == runtime::Verdict::Npe) npe_facts(t, test);
      stack_facts(t, test);
    }
    return std::move(out_);
  }

 private:
  void collect_vals() {
    // One val fact per (entity, line) observed null, across all tests.
    std::set<std::tuple<std::string, int, std::string>> seen;
    for (const TestOutcome& t : outcomes_)
      for (const runtime::ProbeRecord& r : t.probes) {
        if (!r.is_null) continue;
        auto it = probed_.probes.find(r.name);
        if (it == probed_.probes.end()) continue;
        seen.insert({it->second.class_id, r.line, it->second.atom});
      }
    for (const auto& [cls, line, atom] : seen)
      out_.facts.facts.push_back(
          mk_compound("val", {mk_atom(atom), mk_atom("null"),
                              line_term(cls, line)}));
  }

  void npe_facts(const TestOutcome& t, const std::string& test) {
    const runtime::NpeInfo& npe = *t.npe;
    std::string expr = decode(npe);
    if (expr.empty()) {
      out_.notes.push_back(
          t.class_name + "." + t.method_name + ": cannot attribute '" +
          npe.expr_text + "' at " + npe.class_id + ":" +
          std::to_string(npe.line) + " to a known entity");
      return;
    }
    const char* kind = runtime::npe_kind_name(npe.kind);
    out_.facts.facts.push_back(mk_compound(
        "npe_error", {mk_atom(test), mk_atom(expr),
                      line_term(npe.class_id, npe.line), mk_atom(kind)}));
  }

  // The blamed expression is either a probe variable or an expression that
  // survived probing verbatim.
  std::string decode(const runtime::NpeInfo& npe) const {
    auto probe = probed_.probes.find(npe.expr_text);
    if (probe != probed_.probes.end()) return probe->second.atom;

    int ui = p_.unit_index(npe.class_id);
    if (ui < 0) return "";
    const minil::CompilationUnit& u = p_.unit(ui);
    std::set<std::string> found;
    for (const minil::AstNode& n : u.nodes) {
      if (n.range.start_line != npe.line) continue;
      if (!minil::is_expression(n.kind)) continue;
      std::string atom = atoms_.atom(ui, n.id);
      if (atom.empty()) continue;
      if (u.text_of(n) == npe.expr_text) found.insert(atom);
    }
    return found.size() == 1 ? *found.begin() : "";
  }

  void stack_facts(const TestOutcome& t, const std::string& test) {
    int index = 0;
    for (const runtime::StackFrame& f : t.stack) {
      ++index;
      std::string m = method_atom(f.class_name, f.method_name);
      if (m.empty()) continue;
      out_.facts.facts.push_back(mk_compound(
          "stack", {mk_atom(test), mk_int(index), mk_atom(m),
                    line_term(f.class_id, f.line)}));
    }
  }

  std::string test_atom(const TestOutcome& t) const {
    for (const auto& m : p_.tests) {
      if (p_.class_name(m) != t.class_name) continue;
      if (p_.method_name(m) != t.method_name) continue;
      return atoms_.test(m.unit, m.method);
    }
    return "";
  }

  std::string method_atom(const std::string& cls,
                          const std::string& method) const {
    auto c = p_.classes.find(cls);
    if (c == p_.classes.end()) return "";
    const minil::CompilationUnit& u = p_.unit(c->second.unit);
    for (int mem : u.node(c->second.node).children) {
      const minil::AstNode& m = u.node(mem);
      if (m.kind == minil::NodeKind::MethodDecl && m.text == method)
        return atoms_.atom(c->second.unit, mem);
    }
    return "";
  }

  const runtime::Program& p_;
  const AtomTable& atoms_;
  const ProbedProgram& probed_;
  const std::vector<TestOutcome>& outcomes_;
  DynamicFacts out_;
};

}  // namespace

DynamicFacts dynamic_facts(const runtime::Program& program,
                           const AtomTable& atoms,
                           const ProbedProgram& probed,
                           const std::vector<TestOutcome>& outcomes) {
  return Collector(program, atoms, probed, outcomes).run();
}

}  // namespace nullcause::facts
