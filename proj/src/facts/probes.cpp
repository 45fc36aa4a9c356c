#include <algorithm>

#include "nullcause/facts/probes.hpp"

namespace nullcause::facts {

using minil::AstNode;
using minil::CompilationUnit;
using minil::NodeKind;

namespace {

struct Edit {
  int start = 0;
  int end = 0;          // start == end: pure insertion
  std::string text;
};

bool identifier_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_';
}

// Whole-token occurrence check, to detect probe-name collisions with
// identifiers already present in the unit.
bool has_identifier(const std::string& source, const std::string& name) {
  std::size_t pos = 0;
  while ((pos = source.find(name, pos)) != std::string::npos) {
    bool left = pos > 0 && identifier_char(source[pos - 1]);
    bool right = pos + name.size() < source.size() &&
                 identifier_char(source[pos + name.size()]);
    if (!left && !right) return true;
    pos += 1;
  }
  return false;
}

std::string apply_edits(const std::string& text, std::vector<Edit> edits) {
  // Right to left, replacements before insertions at the same offset, so
  // earlier splices never disturb later offsets.
  std::sort(edits.begin(), edits.end(), [](const Edit& a, const Edit& b) {
    if (a.start != b.start) return a.start > b.start;
    return a.end > b.end;
  });
  std::string out = text;
  for (const Edit& e : edits)
    out.replace(static_cast<std::size_t>(e.start),
                static_cast<std::size_t>(e.end - e.start), e.text);
  return out;
}

class Injector {
 public:
  Injector(const runtime::Program& p, const AtomTable& atoms,
           const CoverageMap& breakpoints)
      : p_(p), atoms_(atoms), breakpoints_(breakpoints) {}

  ProbedProgram run() {
    for (std::size_t i = 0; i < p_.units.size(); ++i)
      probe_unit(static_cast<int>(i));
    return std::move(out_);
  }

 private:
  const CompilationUnit* u_ = nullptr;
  int ui_ = -1;
  const std::set<int>* lines_ = nullptr;
  std::vector<Edit> unit_edits_;
  struct Placed {
    std::string var;
    int stmt = -1;  // statement whose prefix declares the probe
  };
  // (atom, line) -> existing probe, for duplicate occurrences.
  std::map<std::pair<std::string, int>, Placed> placed_;

  void probe_unit(int ui) {
    const CompilationUnit& u = p_.unit(ui);
    auto bp = breakpoints_.find(u.class_id);
    if (bp == breakpoints_.end() || bp->second.empty()) {
      out_.sources[u.class_id] = u.source;
      return;
    }
    u_ = &u;
    ui_ = ui;
    lines_ = &bp->second;
    unit_edits_.clear();
    placed_.clear();

    // Statements in textual order; ids are pre-order.
    for (const AstNode& n : u.nodes)
      if (is_statement(n.kind)) probe_statement(n);

    out_.sources[u.class_id] = apply_edits(u.source, unit_edits_);
  }

  bool monitorable(const AstNode& n) const {
    switch (n.kind) {
      case NodeKind::SimpleName:
      case NodeKind::FieldAccess:
        return is_read_position(*u_, n);
      case NodeKind::MethodInvoc:
      case NodeKind::BuiltinInvoc:
        return true;
      default:
        return false;
    }
  }

  // Expression subtrees of a statement, children before parents — i.e. the
  // order the statement evaluates them. Nested statements and blocks are
  // other statements' business.
  void collect(int id, std::vector<int>& order) const {
    const AstNode& n = u_->node(id);
    for (int c : n.children) {
      const AstNode& ch = u_->node(c);
      if (ch.kind == NodeKind::Block || is_statement(ch.kind)) continue;
      collect(c, order);
    }
    if (minil::is_expression(n.kind)) order.push_back(id);
  }

  void probe_statement(const AstNode& stmt) {
    std::vector<int> order;
    for (int c : stmt.children) {
      const AstNode& ch = u_->node(c);
      if (ch.kind == NodeKind::Block || is_statement(ch.kind)) continue;
      collect(c, order);
    }

    std::vector<Edit> replacements;  // within this statement, for rendering
    std::string prefix;

    for (int id : order) {
      const AstNode& n = u_->node(id);
      if (!monitorable(n) || n.non_hoistable) continue;
      if (lines_->count(n.range.start_line) == 0) continue;
      // The probe declaration lands on the statement's first line; it only
      // records if that is the line it names.
      if (n.range.start_line != stmt.range.start_line) continue;

      std::string atom = atoms_.atom(ui_, id);
      if (atom.empty()) {
        note(n, "no stable name for this expression");
        continue;
      }
      std::string var = atom + "_line_" + std::to_string(n.range.start_line);

      auto key = std::make_pair(atom, n.range.start_line);
      auto dup = placed_.find(key);
      if (dup != placed_.end()) {
        // Variable reads cannot change mid-statement, so later occurrences
        // in the same statement may share the first probe. Field reads can
        // (a call in between may write the field), and occurrences in other
        // statements may be out of the probe's scope; those stay untouched.
        if (n.kind == NodeKind::SimpleName && dup->second.stmt == stmt.id)
          replacements.push_back(
              {n.range.start, n.range.start + n.range.length,
               dup->second.var});
        continue;
      }
      if (has_identifier(u_->source, var)) {
        note(n, "probe name '" + var + "' collides with an identifier");
        continue;
      }

      prefix += "var " + var + " = " + render(n, replacements) + "; ";
      consume_inside(n, replacements);
      replacements.push_back(
          {n.range.start, n.range.start + n.range.length, var});
      placed_[key] = Placed{var, stmt.id};
      out_.probes[var] =
          ProbeInfo{atom, u_->class_id, n.range.start_line,
                    u_->text_of(n)};
    }

    if (!prefix.empty())
      unit_edits_.push_back({stmt.range.start, stmt.range.start, prefix});
    for (const Edit& e : replacements) unit_edits_.push_back(e);
  }

  // The node's source text with already-probed subexpressions replaced by
  // their probe variables.
  std::string render(const AstNode& n, const std::vector<Edit>& replacements) {
    std::vector<Edit> inside;
    for (const Edit& e : replacements)
      if (e.start >= n.range.start && e.end <= n.range.start + n.range.length)
        inside.push_back({e.start - n.range.start, e.end - n.range.start,
                          e.text});
    return apply_edits(u_->text_of(n), std::move(inside));
  }

  // Replacements inside a span are subsumed once the whole span is replaced.
  void consume_inside(const AstNode& n, std::vector<Edit>& replacements) {
    std::erase_if(replacements, [&](const Edit& e) {
      return e.start >= n.range.start &&
             e.end <= n.range.start + n.range.length;
    });
  }

  void note(const AstNode& n, const std::string& why) {
    out_.notes.push_back(u_->class_id + ":" +
                         std::to_string(n.range.start_line) + ": skipped '" +
                         u_->text_of(n) + "': " + why);
  }

  const runtime::Program& p_;
  const AtomTable& atoms_;
  const CoverageMap& breakpoints_;
  ProbedProgram out_;
};

}  // namespace

ProbedProgram inject_probes(const runtime::Program& program,
                            const AtomTable& atoms,
                            const CoverageMap& breakpoints) {
  return Injector(program, atoms, breakpoints).run();
}

}  // namespace nullcause::facts
