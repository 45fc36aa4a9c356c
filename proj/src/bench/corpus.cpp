#include "nullcause/bench/corpus.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "nullcause/minil/parse.hpp"
#include "nullcause/runtime/interp.hpp"
#include "nullcause/runtime/program.hpp"

namespace nullcause::bench {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  if (!in.is_open()) throw ValidationError("cannot open " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json parse_ground_truth(const fs::path& p) {
  try {
    return Json::parse(read_file(p));
  } catch (const Json::exception& e) {
    throw ValidationError(p.string() + ": " + e.what());
  }
}

// The declared failing tests must be exactly the tests that fail with a
// null error; everything else must pass.
void check_failures(const BugCase& bug) {
  std::vector<minil::CompilationUnit> units;
  for (const auto& [id, text] : bug.sources)
    units.push_back(minil::parse(text, id));
  runtime::Program program = runtime::link(std::move(units));

  std::set<std::string> declared(bug.failing_tests.begin(),
                                 bug.failing_tests.end());
  std::set<std::string> npe_failures;
  for (const runtime::TestOutcome& t : runtime::run_tests(program)) {
    std::string name = t.class_name + "." + t.method_name;
    if (t.verdict == runtime::Verdict::Npe) {
      npe_failures.insert(name);
    } else if (t.verdict != runtime::Verdict::Passed) {
      throw ValidationError(bug.id + ": " + name + " fails without an NPE (" +
                            runtime::verdict_name(t.verdict) + ")");
    }
  }
  if (npe_failures != declared) {
    std::string have;
    for (const std::string& n : npe_failures) have += " " + n;
    throw ValidationError(bug.id +
                          ": declared failing tests do not match the tests "
                          "that fail with an NPE:" +
                          (have.empty() ? " none do" : have));
  }

  // Ground-truth positions must exist in the program.
  for (const FaultLocation& loc : bug.fault_locations) {
    int ui = program.unit_index(loc.class_id);
    if (ui < 0)
      throw ValidationError(bug.id + ": fault location names unknown class " +
                            loc.class_id);
    const minil::CompilationUnit& u = program.unit(ui);
    int lines = 1 + static_cast<int>(
                        std::count(u.source.begin(), u.source.end(), '\n'));
    if (loc.line < 1 || loc.line > lines)
      throw ValidationError(bug.id + ": fault line " + loc.class_id + ":" +
                            std::to_string(loc.line) + " out of range");
  }
  for (const CauseRange& c : bug.causes) {
    int ui = program.unit_index(c.class_id);
    if (ui < 0)
      throw ValidationError(bug.id + ": cause range names unknown class " +
                            c.class_id);
    const minil::CompilationUnit& u = program.unit(ui);
    try {
      const minil::AstNode& n = minil::node_at(u, c.start, c.length);
      if (n.range.start != c.start || n.range.length != c.length)
        throw ValidationError(bug.id + ": cause range " + c.class_id + "[" +
                              std::to_string(c.start) + "+" +
                              std::to_string(c.length) +
                              ") is not the exact extent of a node (nearest: "
                              + u.text_of(n) + ")");
    } catch (const minil::NotFound&) {
      throw ValidationError(bug.id + ": cause range " + c.class_id + "[" +
                            std::to_string(c.start) + "+" +
                            std::to_string(c.length) + ") matches no node");
    }
  }
}

}  // namespace

BugCase load_bug(const std::string& dir) {
  fs::path root(dir);
  while (!root.empty() && root.filename().empty()) root = root.parent_path();
  if (!fs::is_directory(root))
    throw ValidationError(dir + " is not a directory");

  BugCase bug;
  bug.id = root.filename().string();
  bug.dir = root.string();

  fs::path src = root / "src";
  if (!fs::is_directory(src))
    throw ValidationError(bug.id + ": no src/ directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(src))
    if (entry.is_regular_file() && entry.path().extension() == ".mnl")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw ValidationError(bug.id + ": no .mnl files");
  for (const fs::path& f : files)
    bug.sources.emplace_back(f.stem().string(), read_file(f));

  Json gt = parse_ground_truth(root / "ground_truth.json");
  try {
    for (const Json& t : gt.at("failing_tests"))
      bug.failing_tests.push_back(t.get<std::string>());
    for (const Json& l : gt.at("fault_locations"))
      bug.fault_locations.push_back(FaultLocation{
          l.at("class").get<std::string>(), l.at("line").get<int>()});
    for (const Json& c : gt.at("causes"))
      bug.causes.push_back(CauseRange{c.at("class").get<std::string>(),
                                      c.at("start").get<int>(),
                                      c.at("length").get<int>()});
    bug.in_scope = gt.at("in_scope").get<bool>();
    if (gt.contains("notes")) bug.notes = gt.at("notes").get<std::string>();
  } catch (const Json::exception& e) {
    throw ValidationError(bug.id + ": ground_truth.json: " + e.what());
  }

  if (bug.failing_tests.empty())
    throw ValidationError(bug.id + ": no failing tests declared");
  if (bug.fault_locations.empty())
    throw ValidationError(bug.id + ": no fault locations declared");
  if (bug.causes.empty())
    throw ValidationError(bug.id + ": no cause ranges declared");

  try {
    check_failures(bug);
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception& e) {
    throw ValidationError(bug.id + ": " + e.what());
  }
  return bug;
}

std::vector<BugCase> load_corpus(const std::string& dir) {
  fs::path root(dir);
  if (!fs::is_directory(root))
    throw ValidationError(dir + " is not a directory");
  std::vector<fs::path> entries;
  for (const auto& entry : fs::directory_iterator(root))
    if (entry.is_directory()) entries.push_back(entry.path());
  std::sort(entries.begin(), entries.end());
  std::vector<BugCase> corpus;
  for (const fs::path& p : entries) corpus.push_back(load_bug(p.string()));
  if (corpus.empty()) throw ValidationError(dir + ": empty corpus");
  return corpus;
}

}  // namespace nullcause::bench
