#include <algorithm>

#include "nullcause/minil/parse.hpp"
#include "nullcause/runtime/program.hpp"

namespace nullcause::runtime {

namespace {

int column_of(const std::string& source, int offset) {
  int col = 1;
  for (int i = offset - 1;
       i >= 0 && source[static_cast<std::size_t>(i)] != '\n'; --i)
    ++col;
  return col;
}

[[noreturn]] void link_error(const std::string& msg,
                             const minil::CompilationUnit& unit,
                             const minil::AstNode& at) {
  throw minil::NameError(msg, at.range.start_line,
                         column_of(unit.source, at.range.start));
}

int builtin_arity(const std::string& name) {
  return name == "concat" ? 2 : 1;  // len, parse_int take one argument
}

}  // namespace

int Program::unit_index(const std::string& class_id) const {
  for (std::size_t i = 0; i < units.size(); ++i)
    if (units[i].class_id == class_id) return static_cast<int>(i);
  return -1;
}

const Program::MethodRef* Program::call_target(int unit, int node) const {
  auto it = call_targets.find({unit, node});
  return it == call_targets.end() ? nullptr : &it->second;
}

const Program::ClassRef* Program::ctor_target(int unit, int node) const {
  auto it = ctor_targets.find({unit, node});
  return it == ctor_targets.end() ? nullptr : &it->second;
}

std::vector<int> Program::params_of(const MethodRef& m) const {
  std::vector<int> out;
  for (int c : unit(m.unit).node(m.method).children)
    if (unit(m.unit).node(c).kind == minil::NodeKind::Param) out.push_back(c);
  return out;
}

int Program::body_of(const MethodRef& m) const {
  for (int c : unit(m.unit).node(m.method).children)
    if (unit(m.unit).node(c).kind == minil::NodeKind::Block) return c;
  return -1;
}

std::vector<int> Program::fields_of(const ClassRef& c) const {
  std::vector<int> out;
  for (int ch : unit(c.unit).node(c.node).children)
    if (unit(c.unit).node(ch).kind == minil::NodeKind::FieldDecl)
      out.push_back(ch);
  return out;
}

Program link(std::vector<minil::CompilationUnit> units) {
  Program p;
  p.units = std::move(units);
  std::sort(p.units.begin(), p.units.end(),
            [](const minil::CompilationUnit& a,
               const minil::CompilationUnit& b) {
              return a.class_id < b.class_id;
            });

  // Classes are program-unique; methods index per class, plus a global name
  // table for dotted calls.
  std::map<std::string, Program::MethodRef> methods_by_class_and_name;
  std::map<std::string, std::vector<Program::MethodRef>> methods_by_name;
  for (std::size_t ui = 0; ui < p.units.size(); ++ui) {
    const minil::CompilationUnit& u = p.units[ui];
    for (int cls : u.classes) {
      const minil::AstNode& c = u.node(cls);
      auto ins =
          p.classes.emplace(c.text, Program::ClassRef{static_cast<int>(ui), cls});
      if (!ins.second)
        link_error("duplicate class '" + c.text + "'", u, c);
      for (int mem : c.children) {
        const minil::AstNode& m = u.node(mem);
        if (m.kind != minil::NodeKind::MethodDecl) continue;
        Program::MethodRef ref{static_cast<int>(ui), cls, mem};
        methods_by_class_and_name[c.text + "." + m.text] = ref;
        methods_by_name[m.text].push_back(ref);
        if (m.is_test) p.tests.push_back(ref);
      }
    }
  }

  // Resolve calls and constructors, checking arity where it is static.
  for (std::size_t ui = 0; ui < p.units.size(); ++ui) {
    const minil::CompilationUnit& u = p.units[ui];
    for (const minil::AstNode& n : u.nodes) {
      if (n.kind == minil::NodeKind::MethodInvoc) {
        bool dotted = !n.children.empty() &&
                      u.node(n.children[0]).role == "receiver";
        int argc = static_cast<int>(n.children.size()) - (dotted ? 1 : 0);
        Program::MethodRef target;
        if (dotted) {
          auto hit = methods_by_name.find(n.text);
          if (hit == methods_by_name.end())
            link_error("no method named '" + n.text + "'", u, n);
          if (hit->second.size() > 1)
            link_error("method name '" + n.text +
                           "' is declared by more than one class; dotted "
                           "calls need a unique name",
                       u, n);
          target = hit->second.front();
        } else {
          // Implicit this-call: resolve within the enclosing class.
          int cls = n.parent;
          while (u.node(cls).kind != minil::NodeKind::ClassDecl)
            cls = u.node(cls).parent;
          auto hit = methods_by_class_and_name.find(u.node(cls).text + "." +
                                                    n.text);
          if (hit == methods_by_class_and_name.end())
            link_error("class '" + u.node(cls).text + "' has no method '" +
                           n.text + "'",
                       u, n);
          target = hit->second;
        }
        int arity = static_cast<int>(p.params_of(target).size());
        if (argc != arity)
          link_error("method '" + n.text + "' takes " +
                         std::to_string(arity) + " argument(s), got " +
                         std::to_string(argc),
                     u, n);
        p.call_targets[{static_cast<int>(ui), n.id}] = target;
      } else if (n.kind == minil::NodeKind::NewObject) {
        auto hit = p.classes.find(n.text);
        if (hit == p.classes.end())
          link_error("no class named '" + n.text + "'", u, n);
        int nfields = static_cast<int>(p.fields_of(hit->second).size());
        int argc = static_cast<int>(n.children.size());
        if (argc > nfields)
          link_error("class '" + n.text + "' has " + std::to_string(nfields) +
                         " field(s); cannot initialize " +
                         std::to_string(argc),
                     u, n);
        p.ctor_targets[{static_cast<int>(ui), n.id}] = hit->second;
      } else if (n.kind == minil::NodeKind::BuiltinInvoc) {
        int argc = static_cast<int>(n.children.size());
        if (argc != builtin_arity(n.text))
          link_error("builtin '" + n.text + "' takes " +
                         std::to_string(builtin_arity(n.text)) +
                         " argument(s), got " + std::to_string(argc),
                     u, n);
      }
    }
  }
  return p;
}

}  // namespace nullcause::runtime
