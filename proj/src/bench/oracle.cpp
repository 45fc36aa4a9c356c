#include "nullcause/bench/oracle.hpp"

#include <map>
#include <vector>

#include "nullcause/facts/atoms.hpp"
#include "nullcause/minil/parse.hpp"
#include "nullcause/runtime/interp.hpp"
#include "nullcause/runtime/program.hpp"

namespace nullcause::bench {

namespace {

// A storage cell: its declaring node plus the activation (frame for locals
// and parameters, object for fields).
using CellKey = std::tuple<const minil::CompilationUnit*, int, long long,
                           long long>;

struct Edge {
  OracleSpot to;
  OracleSpot from;
  bool operator<(const Edge& o) const {
    return std::tie(to, from) < std::tie(o.to, o.from);
  }
};

// Records every null-carrying copy the interpreter performs.
struct FlowRecorder : runtime::ExecutionObserver {
  const runtime::Program* program = nullptr;
  const facts::AtomTable* atoms = nullptr;
  // cell -> class:line of its latest store. The class is the store site's,
  // not the declaring one: a constructor argument can set a field from
  // another file, and the spot must name the line that performed the store.
  std::map<CellKey, std::pair<std::string, int>> store_site;
  std::set<Edge> edges;

  std::string atom_of(const minil::CompilationUnit* unit, int node) const {
    return atoms->atom(program->unit_index(unit->class_id), node);
  }
  OracleSpot spot(const minil::CompilationUnit* unit, int node,
                  int line) const {
    return {atom_of(unit, node), unit->class_id, line};
  }
  OracleSpot slot_spot(const runtime::SlotRef& slot, const std::string& cls,
                       int line) const {
    return {atom_of(slot.unit, slot.decl), cls, line};
  }
  void add_edge(const OracleSpot& to, const OracleSpot& from) {
    if (std::get<0>(to).empty() || std::get<0>(from).empty()) return;
    edges.insert(Edge{to, from});
  }

  void stored(const runtime::SlotRef& slot, const runtime::EvalRef& src,
              bool is_null) override {
    store_site[CellKey{slot.unit, slot.decl, slot.object, slot.frame}] = {
        slot.site->class_id, slot.line};
    if (is_null)
      add_edge(slot_spot(slot, slot.site->class_id, slot.line),
               spot(src.unit, src.node, src.line));
  }
  void loaded(const runtime::EvalRef& use, const runtime::SlotRef& slot,
              bool is_null) override {
    if (!is_null) return;
    auto it = store_site.find(
        CellKey{slot.unit, slot.decl, slot.object, slot.frame});
    if (it == store_site.end()) return;
    if (it->second == std::make_pair(use.unit->class_id, use.line)) return;
    add_edge(spot(use.unit, use.node, use.line),
             slot_spot(slot, it->second.first, it->second.second));
  }
  void returned(const runtime::EvalRef& call, const runtime::EvalRef* ret,
                bool is_null) override {
    if (!is_null || ret == nullptr) return;
    add_edge(spot(call.unit, call.node, call.line),
             spot(ret->unit, ret->node, ret->line));
  }
};

}  // namespace

std::set<OracleSpot> oracle_candidates(const BugCase& bug) {
  std::vector<minil::CompilationUnit> units;
  for (const auto& [id, text] : bug.sources)
    units.push_back(minil::parse(text, id));
  runtime::Program program = runtime::link(std::move(units));

  // Entity naming needs the coverage of a plain run; the flow analysis
  // below never looks at the deduction rules or the extracted facts.
  facts::CoverageMap covered;
  for (const auto& t : runtime::run_tests(program))
    for (const auto& [cls, line] : t.covered) covered[cls].insert(line);
  facts::AtomTable atoms = facts::assign_atoms(program, covered);

  std::set<OracleSpot> out;
  for (const std::string& test : bug.failing_tests) {
    FlowRecorder recorder;
    recorder.program = &program;
    recorder.atoms = &atoms;
    runtime::RunOptions options;
    options.test_filter = {test};
    options.observer = &recorder;
    std::vector<runtime::TestOutcome> outcomes =
        runtime::run_tests(program, options);
    for (const runtime::TestOutcome& t : outcomes) {
      if (t.verdict != runtime::Verdict::Npe) continue;
      int ui = program.unit_index(t.npe->class_id);
      OracleSpot start{atoms.atom(ui, t.npe->node), t.npe->class_id,
                       t.npe->line};
      if (std::get<0>(start).empty()) continue;
      // Everything backwards-reachable from the error along null copies.
      std::set<OracleSpot> reached{start};
      std::vector<OracleSpot> frontier{start};
      while (!frontier.empty()) {
        OracleSpot at = frontier.back();
        frontier.pop_back();
        for (const Edge& e : recorder.edges) {
          if (e.to != at || reached.count(e.from)) continue;
          reached.insert(e.from);
          frontier.push_back(e.from);
        }
      }
      out.insert(reached.begin(), reached.end());
    }
  }
  return out;
}

std::set<OracleSpot> prefilter_candidates(
    const localizer::LocalizeOutput& out) {
  std::set<OracleSpot> spots;
  for (const localizer::CandidateInfo& c : out.raw_candidates)
    spots.insert(
        OracleSpot{c.cause.entity, c.cause.class_id, c.cause.line});
  return spots;
}

}  // namespace nullcause::bench
