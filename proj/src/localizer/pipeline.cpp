#include "nullcause/localizer/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "nullcause/facts/atoms.hpp"
#include "nullcause/facts/dynamic_facts.hpp"
#include "nullcause/facts/probes.hpp"
#include "nullcause/facts/static_facts.hpp"
#include "nullcause/minil/parse.hpp"
#include "nullcause/rules/query.hpp"
#include "nullcause/rules/rulebase.hpp"
#include "nullcause/runtime/interp.hpp"
#include "nullcause/runtime/program.hpp"

namespace nullcause::localizer {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

using SpotKey = std::tuple<std::string, std::string, int>;

SpotKey key_of(const Spot& s) { return {s.entity, s.class_id, s.line}; }

Spot spot_from(const std::string& entity, const logic::TermPtr& loc) {
  return Spot{entity, loc->args[0]->text,
              static_cast<int>(loc->args[1]->value)};
}

runtime::Program parse_and_link(
    const std::vector<std::pair<std::string, std::string>>& sources) {
  std::vector<minil::CompilationUnit> units;
  for (const auto& [id, text] : sources)
    units.push_back(minil::parse(text, id));
  return runtime::link(std::move(units));
}

// Rewrites probe variable names back to the expressions they stand for, so
// a probed failure can be compared with the original one. Longer names are
// replaced first so none is clobbered inside another.
std::string canonical_failure(
    std::string text, const std::map<std::string, facts::ProbeInfo>& probes) {
  std::vector<std::pair<std::string, std::string>> renames;
  for (const auto& [name, info] : probes)
    renames.emplace_back(name, info.original_text);
  std::sort(renames.begin(), renames.end(), [](const auto& a, const auto& b) {
    return a.first.size() != b.first.size() ? a.first.size() > b.first.size()
                                            : a.first < b.first;
  });
  for (const auto& [name, original] : renames) {
    std::size_t at = 0;
    while ((at = text.find(name, at)) != std::string::npos) {
      text.replace(at, name.size(), original);
      at += original.size();
    }
  }
  return text;
}

ProbeCheck check_probed_run(
    const std::vector<runtime::TestOutcome>& original,
    const std::vector<runtime::TestOutcome>& probed,
    const std::map<std::string, facts::ProbeInfo>& probes) {
  ProbeCheck out;
  if (original.size() != probed.size()) {
    out.ok = false;
    out.detail = "test counts differ between runs";
    return out;
  }
  for (std::size_t i = 0; i < original.size(); ++i) {
    const auto& a = original[i];
    const auto& b = probed[i];
    std::string name = a.class_name + "." + a.method_name;
    if (a.verdict != b.verdict) {
      out.ok = false;
      out.detail = name + ": verdict " + runtime::verdict_name(a.verdict) +
                   " became " + runtime::verdict_name(b.verdict);
      return out;
    }
    std::string want = runtime::format_failure(a);
    std::string got = canonical_failure(runtime::format_failure(b), probes);
    if (want != got) {
      out.ok = false;
      out.detail = name + ": failure changed\n--- original\n" + want +
                   "--- probed (canonicalized)\n" + got;
      return out;
    }
  }
  return out;
}

// First path from the failing expression back to the cause along the
// null-flow edges, following deduction order. Visited entities are per
// path, like the reachability rules' accumulator.
std::vector<Hop> find_path(const Spot& error, const Spot& cause,
                           const std::vector<Hop>& edges) {
  std::vector<Hop> path;
  std::set<SpotKey> visited{key_of(error)};
  std::function<bool(const Spot&)> walk = [&](const Spot& at) -> bool {
    for (const Hop& e : edges) {
      if (!(e.to == at) || visited.count(key_of(e.from))) continue;
      path.push_back(e);
      if (e.from == cause) return true;
      visited.insert(key_of(e.from));
      if (walk(e.from)) return true;
      visited.erase(key_of(e.from));
      path.pop_back();
    }
    return false;
  };
  walk(error);
  return path;
}

std::string trim_copy(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  std::size_t e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

// Source text of line `line` (1-based) in `u`, trimmed.
std::string line_text(const minil::CompilationUnit& u, int line) {
  std::istringstream in(u.source);
  std::string text;
  for (int i = 0; i < line && std::getline(in, text); ++i) {
  }
  return trim_copy(text);
}

int cause_clause_ordinal(const std::string& npe_type,
                         const std::string& scheme) {
  if (scheme == "direct") return npe_type == "null_arg" ? 1 : 3;
  if (scheme == "origin") return npe_type == "null_arg" ? 2 : 4;
  return npe_type == "null_arg" ? 5 : 6;
}

const char* trace_kind_name(logic::TraceEvent::Kind k) {
  switch (k) {
    case logic::TraceEvent::Kind::Call: return "call";
    case logic::TraceEvent::Kind::Exit: return "exit";
    case logic::TraceEvent::Kind::Redo: return "redo";
    case logic::TraceEvent::Kind::Fail: return "fail";
    case logic::TraceEvent::Kind::Cut: return "cut";
  }
  return "?";
}

struct Stages {
  Clock::time_point mark = Clock::now();
  std::vector<StageTiming> done;
  void finish(const char* name) {
    auto now = Clock::now();
    done.push_back(StageTiming{
        name, std::chrono::duration<double, std::milli>(now - mark).count()});
    mark = now;
  }
};

}  // namespace

LocalizeOutput localize_sources(
    const std::string& project_id,
    const std::vector<std::pair<std::string, std::string>>& sources,
    const PipelineOptions& options) {
  rules::RuleBase rules = rules::RuleBase::embedded();
  if (!options.disable_rank_rule.empty()) {
    if (!rules.defines(options.disable_rank_rule))
      throw PipelineError("input", "unknown ranking predicate '" +
                                       options.disable_rank_rule + "'");
    rules = rules.with_disabled(options.disable_rank_rule);
  }

  LocalizeOutput out;
  out.report.project = project_id;
  out.report.rule_version = rules.version();
  Stages stages;

  // ---- coverage: run the tests as written ---------------------------------
  runtime::Program program;
  std::vector<runtime::TestOutcome> outcomes;
  facts::CoverageMap covered, breakpoints;
  try {
    program = parse_and_link(sources);
    if (program.tests.empty())
      throw std::runtime_error("the project declares no test methods");
    runtime::RunOptions rt;
    rt.test_filter = options.tests;
    rt.step_limit = options.step_limit;
    outcomes = runtime::run_tests(program, rt);
    for (const auto& t : outcomes)
      for (const auto& [cls, line] : t.covered) {
        covered[cls].insert(line);
        if (t.verdict == runtime::Verdict::Npe) breakpoints[cls].insert(line);
      }
  } catch (const std::exception& e) {
    throw PipelineError("coverage", e.what());
  }
  stages.finish("coverage");

  // ---- static: name entities, extract code facts, plant probes ------------
  facts::AtomTable atoms;
  facts::FactBase statics;
  facts::ProbedProgram probed;
  try {
    atoms = facts::assign_atoms(program, covered);
    statics = facts::static_facts(program, atoms, covered);
    probed = facts::inject_probes(program, atoms, breakpoints);
  } catch (const std::exception& e) {
    throw PipelineError("static", e.what());
  }
  stages.finish("static");

  // ---- dynamic: run the probed program, collect value facts ---------------
  facts::DynamicFacts dyn;
  try {
    std::vector<std::pair<std::string, std::string>> probed_sources(
        probed.sources.begin(), probed.sources.end());
    runtime::Program probed_program = parse_and_link(probed_sources);
    runtime::RunOptions rt;
    rt.test_filter = options.tests;
    rt.step_limit = options.step_limit;
    rt.probe_mode = true;
    rt.breakpoints = breakpoints;
    std::vector<runtime::TestOutcome> probed_outcomes =
        runtime::run_tests(probed_program, rt);
    out.probe_check = check_probed_run(outcomes, probed_outcomes,
                                       probed.probes);
    dyn = facts::dynamic_facts(program, atoms, probed, probed_outcomes);
  } catch (const std::exception& e) {
    throw PipelineError("dynamic", e.what());
  }
  stages.finish("dynamic");
  out.probed_sources = probed.sources;

  // ---- fault_localizer: deduce causes, rank them ---------------------------
  try {
    std::vector<logic::TermPtr> all_facts = statics.facts;
    all_facts.insert(all_facts.end(), dyn.facts.facts.begin(),
                     dyn.facts.facts.end());
    out.facts_text = statics.to_text() + dyn.facts.to_text();
    logic::KnowledgeBase kb = rules::assemble_kb(all_facts, rules);

    std::vector<rules::Candidate> candidates = rules::query_causes(kb);
    std::vector<Hop> edges;
    for (const rules::FlowEdge& e : rules::null_flow_edges(kb))
      edges.push_back(Hop{spot_from(e.to_entity, e.to_loc),
                          spot_from(e.from_entity, e.from_loc)});

    for (const rules::Candidate& c : candidates) {
      CandidateInfo info;
      info.supporter = Supporter{c.test, spot_from(c.expr, c.line)};
      info.cause = spot_from(c.cause, c.loc);
      info.scheme = c.scheme;
      info.npe_type = c.npe_type;
      info.status = rules::rank_status(kb, c);
      if (c.scheme != "direct")
        info.evidence = find_path(info.supporter.expr, info.cause, edges);
      out.raw_candidates.push_back(std::move(info));
    }

    out.report.candidates = dedup_and_rank(out.raw_candidates);
    if (static_cast<int>(out.report.candidates.size()) > options.top)
      out.report.candidates.resize(static_cast<std::size_t>(options.top));

    // Source text for each reported cause: the named node when one sits on
    // that line, otherwise the line itself.
    std::map<SpotKey, std::string> code_at;
    for (const auto& [where, atom] : atoms.node_atom) {
      const minil::CompilationUnit& u = program.unit(where.first);
      const minil::AstNode& n = u.node(where.second);
      code_at.emplace(SpotKey{atom, u.class_id, n.range.start_line},
                      u.text_of(n));
    }
    for (RankedCause& rc : out.report.candidates) {
      auto it = code_at.find(key_of(rc.cause));
      if (it != code_at.end()) {
        rc.code = it->second;
      } else {
        int ui = program.unit_index(rc.cause.class_id);
        if (ui >= 0) rc.code = line_text(program.unit(ui), rc.cause.line);
      }
    }

    if (options.want_trace) {
      logic::SolveOptions so;
      so.depth_limit = options.depth_limit;
      logic::Engine plain(kb, so);
      logic::Query errors;
      errors.goal = logic::mk_compound(
          "npe_error", {logic::mk_var(0, "T"), logic::mk_var(1, "E"),
                        logic::mk_var(2, "L"), logic::mk_var(3, "K")});
      errors.num_vars = 4;
      errors.var_names = {"T", "E", "L", "K"};
      for (const logic::Solution& err : plain.solve_all(errors)) {
        logic::Query q;
        q.goal = logic::mk_compound(
            "cause_of",
            {logic::mk_compound("npe", {err.bindings[1], err.bindings[2]}),
             logic::mk_var(0, "Cause"), logic::mk_var(1, "Loc")});
        q.num_vars = 2;
        q.var_names = {"Cause", "Loc"};
        TraceSection section;
        section.header = logic::to_string(q.goal) + "  [test " +
                         logic::to_string(err.bindings[0]) + ", kind " +
                         logic::to_string(err.bindings[3]) + "]";
        logic::SolveOptions traced;
        traced.depth_limit = options.depth_limit;
        traced.trace = &section.events;
        logic::Engine(kb, traced).solve_all(q);
        out.trace.push_back(std::move(section));
      }
    }
  } catch (const std::exception& e) {
    throw PipelineError("fault_localizer", e.what());
  }
  stages.finish("fault_localizer");

  // ---- assemble the report -------------------------------------------------
  std::map<std::pair<std::string, std::string>, std::pair<int, int>> test_decl;
  for (const runtime::Program::MethodRef& m : program.tests)
    test_decl[{program.class_name(m), program.method_name(m)}] = {m.unit,
                                                                  m.method};
  bool any_npe = false;
  for (const runtime::TestOutcome& t : outcomes) {
    if (t.verdict == runtime::Verdict::Npe) any_npe = true;
    if (t.verdict == runtime::Verdict::Passed) continue;
    auto decl = test_decl.at({t.class_name, t.method_name});
    out.report.tests.push_back(
        FailingTest{atoms.test(decl.first, decl.second),
                    t.class_name + "." + t.method_name,
                    runtime::format_failure(t)});
  }
  out.no_npe = !any_npe;
  if (out.no_npe) out.report.notice = "no NPE detected";
  out.report.timings = stages.done;
  return out;
}

LocalizeOutput localize(const std::string& dir,
                        const PipelineOptions& options) {
  fs::path root(dir);
  while (!root.empty() && root.filename().empty()) root = root.parent_path();
  if (!fs::is_directory(root))
    throw PipelineError("input", dir + " is not a directory");
  fs::path src = fs::is_directory(root / "src") ? root / "src" : root;

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(src))
    if (entry.is_regular_file() && entry.path().extension() == ".mnl")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty())
    throw PipelineError("input",
                        "no .mnl files in " + src.string());

  std::vector<std::pair<std::string, std::string>> sources;
  for (const fs::path& f : files) {
    std::ifstream in(f);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (!in.good() && !in.eof())
      throw PipelineError("input", "cannot read " + f.string());
    sources.emplace_back(f.stem().string(), buf.str());
  }
  return localize_sources(root.filename().string(), sources, options);
}

std::string render_trace(const LocalizeOutput& out, bool with_timings) {
  std::ostringstream os;
  const Report& r = out.report;
  os << "project: " << r.project << "  (rules " << r.rule_version << ")\n";
  for (const FailingTest& t : r.tests) os << "failing: " << t.name << "\n";
  if (!r.notice.empty()) os << r.notice << "\n";

  constexpr std::size_t kMaxEvents = 2000;
  for (const TraceSection& section : out.trace) {
    os << "\n== deduction: " << section.header << "\n";
    std::size_t shown = std::min(section.events.size(), kMaxEvents);
    for (std::size_t i = 0; i < shown; ++i) {
      const logic::TraceEvent& e = section.events[i];
      os << std::string(static_cast<std::size_t>(e.depth) * 2, ' ')
         << trace_kind_name(e.kind) << " " << e.goal;
      if (e.clause_ordinal > 0)
        os << "  (clause " << e.clause_ordinal << ", rules line "
           << e.source_line << ")";
      if (e.kind == logic::TraceEvent::Kind::Cut && e.pruned > 0)
        os << "  (pruned " << e.pruned << ")";
      os << "\n";
    }
    if (section.events.size() > shown)
      os << "  ... (" << section.events.size() - shown << " more events)\n";
  }

  os << "\n== candidates (deduction order)\n";
  for (const CandidateInfo& c : out.raw_candidates) {
    os << "cause clause " << cause_clause_ordinal(c.npe_type, c.scheme) << "  "
       << c.scheme << " " << c.npe_type << "  " << c.cause.entity << " @ "
       << c.cause.class_id << ":" << c.cause.line << "  ["
       << rules::rank_status_name(c.status) << "]  for " << c.supporter.test
       << "\n";
  }

  os << "\n== ranking\n" << render_text(r, with_timings);
  return os.str();
}

}  // namespace nullcause::localizer
