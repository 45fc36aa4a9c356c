#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nullcause/runtime/interp.hpp"

namespace nullcause::runtime {

namespace {

using minil::AstNode;
using minil::CompilationUnit;
using minil::LitKind;
using minil::NodeKind;

struct Value {
  enum class Kind { Null, Int, Bool, Str, Obj };
  Kind kind = Kind::Null;
  long long i = 0;
  bool b = false;
  std::string s;
  long long obj = -1;

  bool is_null() const { return kind == Kind::Null; }
  static Value of_int(long long v) {
    Value x;
    x.kind = Kind::Int;
    x.i = v;
    return x;
  }
  static Value of_bool(bool v) {
    Value x;
    x.kind = Kind::Bool;
    x.b = v;
    return x;
  }
  static Value of_str(std::string v) {
    Value x;
    x.kind = Kind::Str;
    x.s = std::move(v);
    return x;
  }
  static Value of_obj(long long id) {
    Value x;
    x.kind = Kind::Obj;
    x.obj = id;
    return x;
  }
};

bool value_equal(const Value& a, const Value& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Value::Kind::Null: return true;
    case Value::Kind::Int: return a.i == b.i;
    case Value::Kind::Bool: return a.b == b.b;
    case Value::Kind::Str: return a.s == b.s;
    case Value::Kind::Obj: return a.obj == b.obj;  // identity
  }
  return false;
}

// Failure signals; the stack snapshot is taken before throwing.
struct NpeSignal {
  const CompilationUnit* unit;
  int node;
  NpeKind kind;
};
struct AssertSignal {};
struct AbortSignal {
  std::string message;
};

class Interp {
 public:
  Interp(const Program& p, const RunOptions& opt) : p_(p), opt_(opt) {}

  TestOutcome run_test(const Program::MethodRef& test) {
    TestOutcome out;
    out.class_name = p_.class_name(test);
    out.method_name = p_.method_name(test);
    out_ = &out;

    long long self = new_object({test.unit, test.cls});
    frames_.push_back(Frame{test, self, {},
                            p_.unit(test.unit).node(test.method).range.start_line,
                            next_frame_id_++});
    try {
      exec_block(p_.body_of(test));
      out.verdict = Verdict::Passed;
    } catch (const NpeSignal& s) {
      const AstNode& blamed = s.unit->node(s.node);
      out.verdict = Verdict::Npe;
      out.npe = NpeInfo{s.unit->class_id, s.node, blamed.range.start_line,
                        s.kind, s.unit->text_of(blamed)};
    } catch (const AssertSignal&) {
      out.verdict = Verdict::AssertFail;
    } catch (const AbortSignal& a) {
      out.verdict = Verdict::OtherError;
      out.error_text = a.message;
    }
    frames_.clear();
    return out;
  }

 private:
  enum class Flow { Next, Return };

  struct Object {
    Program::ClassRef cls;
    std::map<int, Value> fields;  // FieldDecl id -> value
  };
  struct Frame {
    Program::MethodRef m;
    long long self;
    std::map<int, Value> locals;  // VarDecl/Param id -> value
    int line;
    long long id;
  };

  const CompilationUnit& cur_unit() { return p_.unit(fr().m.unit); }
  Frame& fr() { return frames_.back(); }

  long long new_object(const Program::ClassRef& cls) {
    Object o;
    o.cls = cls;
    for (int f : p_.fields_of(cls)) o.fields[f] = Value{};
    heap_.push_back(std::move(o));
    return static_cast<long long>(heap_.size()) - 1;
  }

  // Every statement/expression evaluation advances the step counter, the
  // frame's current line, and per-test line coverage.
  void touch(const AstNode& n) {
    fr().line = n.range.start_line;
    out_->covered.insert({cur_unit().class_id, n.range.start_line});
    if (++steps_ > opt_.step_limit) abort_test("step limit exceeded");
  }

  void capture_stack() {
    out_->stack.clear();
    for (auto it = frames_.rbegin(); it != frames_.rend(); ++it) {
      const CompilationUnit& u = p_.unit(it->m.unit);
      out_->stack.push_back(StackFrame{u.node(it->m.cls).text,
                                       u.node(it->m.method).text, u.class_id,
                                       it->line});
    }
  }

  [[noreturn]] void npe(int node, NpeKind kind) {
    capture_stack();
    throw NpeSignal{&cur_unit(), node, kind};
  }
  [[noreturn]] void abort_test(const std::string& msg) {
    capture_stack();
    throw AbortSignal{msg};
  }

  // ---- statements ---------------------------------------------------------

  Flow exec_block(int block) {
    for (int s : cur_unit().node(block).children)
      if (exec_stmt(s) == Flow::Return) return Flow::Return;
    return Flow::Next;
  }

  Flow exec_stmt(int id) {
    const AstNode& n = cur_unit().node(id);
    touch(n);
    switch (n.kind) {
      case NodeKind::VarDecl: {
        Value v = eval(n.children[0]);
        observe_store(local_slot(id, n.range.start_line), n.children[0], v);
        fr().locals[id] = v;
        if (opt_.probe_mode) maybe_record_probe(n, v);
        return Flow::Next;
      }
      case NodeKind::Assign:
        exec_assign(n);
        return Flow::Next;
      case NodeKind::Return:
        if (n.children.empty()) {
          ret_ = Value{};
          ret_expr_.reset();
        } else {
          Value v = eval(n.children[0]);
          ret_ = v;
          ret_expr_ = EvalRef{&cur_unit(), n.children[0],
                              cur_unit().node(n.children[0]).range.start_line};
        }
        return Flow::Return;
      case NodeKind::If: {
        if (truth(n.children[0])) return exec_block(n.children[1]);
        if (n.children.size() > 2) {
          const AstNode& alt = cur_unit().node(n.children[2]);
          return alt.kind == NodeKind::Block ? exec_block(alt.id)
                                             : exec_stmt(alt.id);
        }
        return Flow::Next;
      }
      case NodeKind::While:
        while (truth(n.children[0]))
          if (exec_block(n.children[1]) == Flow::Return) return Flow::Return;
        return Flow::Next;
      case NodeKind::ExprStmt:
        eval(n.children[0]);
        return Flow::Next;
      case NodeKind::Assert:
        if (!truth(n.children[0])) {
          capture_stack();
          throw AssertSignal{};
        }
        return Flow::Next;
      default:
        abort_test("unexpected statement node");
    }
  }

  void exec_assign(const AstNode& n) {
    const AstNode& lhs = cur_unit().node(n.children[0]);
    if (lhs.kind == NodeKind::SimpleName) {
      const AstNode& decl = cur_unit().node(lhs.decl);
      Value v = eval(n.children[1]);
      if (decl.kind == NodeKind::FieldDecl) {
        heap_[static_cast<std::size_t>(fr().self)].fields[decl.id] = v;
        observe_store(field_slot(fr().self, decl.id, n.range.start_line),
                      n.children[1], v);
      } else {
        fr().locals[decl.id] = v;
        observe_store(local_slot(decl.id, n.range.start_line), n.children[1],
                      v);
      }
      return;
    }
    // lhs is a field access: evaluate the receiver, then the value.
    Value recv = eval(lhs.children[0]);
    if (recv.is_null()) npe(lhs.children[0], NpeKind::Deref);
    if (recv.kind != Value::Kind::Obj)
      abort_test("type error: field assignment on a non-object");
    int field = field_decl_of(recv.obj, lhs);
    Value v = eval(n.children[1]);
    heap_[static_cast<std::size_t>(recv.obj)].fields[field] = v;
    observe_store(field_slot(recv.obj, field, n.range.start_line),
                  n.children[1], v);
  }

  // Evaluates a condition; null is a null-pointer error blaming the
  // expression, anything non-boolean a type error.
  bool truth(int node_id) {
    Value v = eval(node_id);
    if (v.is_null()) npe(node_id, NpeKind::Operator);
    if (v.kind != Value::Kind::Bool)
      abort_test("type error: condition is not a boolean");
    return v.b;
  }

  // ---- expressions ----------------------------------------------------------

  Value eval(int id) {
    const AstNode& n = cur_unit().node(id);
    touch(n);
    switch (n.kind) {
      case NodeKind::Literal:
        switch (n.lit_kind) {
          case LitKind::Null: return Value{};
          case LitKind::Int: return Value::of_int(n.int_value);
          case LitKind::Bool: return Value::of_bool(n.bool_value);
          case LitKind::Str: return Value::of_str(n.str_value);
        }
        return Value{};
      case NodeKind::This:
        return Value::of_obj(fr().self);
      case NodeKind::SimpleName: {
        const AstNode& decl = cur_unit().node(n.decl);
        Value v;
        SlotRef slot;
        if (decl.kind == NodeKind::FieldDecl) {
          v = heap_[static_cast<std::size_t>(fr().self)].fields[decl.id];
          slot = field_slot(fr().self, decl.id, 0);
        } else {
          v = fr().locals[decl.id];
          slot = local_slot(decl.id, 0);
        }
        if (opt_.observer)
          opt_.observer->loaded(eval_ref(id), slot, v.is_null());
        return v;
      }
      case NodeKind::FieldAccess: {
        Value recv = eval(n.children[0]);
        if (recv.is_null()) npe(n.children[0], NpeKind::Deref);
        if (recv.kind != Value::Kind::Obj)
          abort_test("type error: field access on a non-object");
        int field = field_decl_of(recv.obj, n);
        Value v = heap_[static_cast<std::size_t>(recv.obj)].fields[field];
        if (opt_.observer)
          opt_.observer->loaded(eval_ref(id), field_slot(recv.obj, field, 0),
                                v.is_null());
        return v;
      }
      case NodeKind::MethodInvoc: {
        const Program::MethodRef* target =
            p_.call_target(fr().m.unit, n.id);
        bool dotted = !n.children.empty() &&
                      cur_unit().node(n.children[0]).role == "receiver";
        long long self;
        if (dotted) {
          Value recv = eval(n.children[0]);
          if (recv.is_null()) npe(n.children[0], NpeKind::Deref);
          if (recv.kind != Value::Kind::Obj)
            abort_test("type error: method call on a non-object");
          self = recv.obj;
        } else {
          self = fr().self;
        }
        std::vector<Value> args;
        std::vector<int> arg_nodes;
        for (std::size_t i = dotted ? 1 : 0; i < n.children.size(); ++i) {
          args.push_back(eval(n.children[i]));
          arg_nodes.push_back(n.children[i]);
        }
        return call_method(*target, self, args, arg_nodes, id);
      }
      case NodeKind::BuiltinInvoc: {
        std::vector<Value> args;
        for (int c : n.children) args.push_back(eval(c));
        for (std::size_t i = 0; i < args.size(); ++i)
          if (args[i].is_null()) npe(n.children[i], NpeKind::BuiltinArg);
        return eval_builtin(n, args);
      }
      case NodeKind::NewObject: {
        const Program::ClassRef* cls = p_.ctor_target(fr().m.unit, n.id);
        std::vector<Value> args;
        for (int c : n.children) args.push_back(eval(c));
        long long obj = new_object(*cls);
        std::vector<int> fields = p_.fields_of(*cls);
        for (std::size_t i = 0; i < args.size(); ++i) {
          heap_[static_cast<std::size_t>(obj)].fields[fields[i]] = args[i];
          observe_store(field_slot(obj, fields[i], n.range.start_line),
                        n.children[i], args[i]);
        }
        return Value::of_obj(obj);
      }
      case NodeKind::BinaryOp:
        return eval_binary(n);
      case NodeKind::UnaryOp: {
        Value v = eval(n.children[0]);
        if (v.is_null()) npe(n.children[0], NpeKind::Operator);
        if (v.kind != Value::Kind::Bool)
          abort_test("type error: '!' needs a boolean");
        return Value::of_bool(!v.b);
      }
      default:
        abort_test("unexpected expression node");
    }
  }

  Value eval_binary(const AstNode& n) {
    const std::string& op = n.text;
    if (op == "==" || op == "!=") {
      Value a = eval(n.children[0]);
      Value b = eval(n.children[1]);
      bool eq = value_equal(a, b);
      return Value::of_bool(op == "==" ? eq : !eq);
    }
    if (op == "&&" || op == "||") {
      Value a = eval(n.children[0]);
      if (a.is_null()) npe(n.children[0], NpeKind::Operator);
      if (a.kind != Value::Kind::Bool)
        abort_test("type error: '" + op + "' needs booleans");
      if (op == "&&" && !a.b) return Value::of_bool(false);
      if (op == "||" && a.b) return Value::of_bool(true);
      Value b = eval(n.children[1]);
      if (b.is_null()) npe(n.children[1], NpeKind::Operator);
      if (b.kind != Value::Kind::Bool)
        abort_test("type error: '" + op + "' needs booleans");
      return Value::of_bool(b.b);
    }
    // Arithmetic and comparison: both operands evaluate first; a null
    // operand is blamed left to right.
    Value a = eval(n.children[0]);
    Value b = eval(n.children[1]);
    if (a.is_null()) npe(n.children[0], NpeKind::Operator);
    if (b.is_null()) npe(n.children[1], NpeKind::Operator);
    if (a.kind != Value::Kind::Int || b.kind != Value::Kind::Int)
      abort_test("type error: '" + op + "' needs integers");
    if (op == "+") return Value::of_int(a.i + b.i);
    if (op == "-") return Value::of_int(a.i - b.i);
    if (op == "*") return Value::of_int(a.i * b.i);
    if (op == "<") return Value::of_bool(a.i < b.i);
    abort_test("unexpected operator '" + op + "'");
  }

  Value eval_builtin(const AstNode& n, const std::vector<Value>& args) {
    if (n.text == "len") {
      if (args[0].kind != Value::Kind::Str)
        abort_test("type error: len needs a string");
      return Value::of_int(static_cast<long long>(args[0].s.size()));
    }
    if (n.text == "concat") {
      if (args[0].kind != Value::Kind::Str ||
          args[1].kind != Value::Kind::Str)
        abort_test("type error: concat needs strings");
      return Value::of_str(args[0].s + args[1].s);
    }
    // parse_int
    if (args[0].kind != Value::Kind::Str)
      abort_test("type error: parse_int needs a string");
    const std::string& s = args[0].s;
    std::size_t i = s.size() && s[0] == '-' ? 1 : 0;
    if (i == s.size()) abort_test("parse_int: '" + s + "' is not a number");
    long long v = 0;
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9')
        abort_test("parse_int: '" + s + "' is not a number");
      v = v * 10 + (s[i] - '0');
    }
    return Value::of_int(s[0] == '-' ? -v : v);
  }

  Value call_method(const Program::MethodRef& callee, long long self,
                    const std::vector<Value>& args,
                    const std::vector<int>& arg_nodes, int call_node) {
    if (static_cast<int>(frames_.size()) >= opt_.max_call_depth)
      abort_test("call depth limit exceeded");
    const CompilationUnit& caller_unit = cur_unit();
    const CompilationUnit& callee_unit = p_.unit(callee.unit);

    Frame f{callee, self, {},
            callee_unit.node(callee.method).range.start_line,
            next_frame_id_++};
    frames_.push_back(std::move(f));
    std::vector<int> params = p_.params_of(callee);
    for (std::size_t i = 0; i < args.size(); ++i) {
      fr().locals[params[i]] = args[i];
      if (opt_.observer) {
        SlotRef slot{&callee_unit, params[i], -1, fr().id,
                     callee_unit.node(params[i]).range.start_line,
                     &callee_unit};
        EvalRef src{&caller_unit, arg_nodes[i],
                    caller_unit.node(arg_nodes[i]).range.start_line};
        opt_.observer->stored(slot, src, args[i].is_null());
      }
    }

    ret_ = Value{};
    ret_expr_.reset();
    Flow flow = exec_block(p_.body_of(callee));
    Value result = flow == Flow::Return ? ret_ : Value{};
    std::optional<EvalRef> rexpr =
        flow == Flow::Return ? ret_expr_ : std::nullopt;
    frames_.pop_back();

    if (opt_.observer) {
      EvalRef call{&caller_unit, call_node,
                   caller_unit.node(call_node).range.start_line};
      opt_.observer->returned(call, rexpr ? &*rexpr : nullptr,
                              result.is_null());
    }
    return result;
  }

  // ---- observer and probe helpers -------------------------------------------

  EvalRef eval_ref(int node) {
    return EvalRef{&cur_unit(), node, cur_unit().node(node).range.start_line};
  }
  SlotRef local_slot(int decl, int line) {
    return SlotRef{&cur_unit(), decl, -1, fr().id, line, &cur_unit()};
  }
  SlotRef field_slot(long long obj, int decl, int line) {
    const Program::ClassRef& cls = heap_[static_cast<std::size_t>(obj)].cls;
    return SlotRef{&p_.unit(cls.unit), decl, obj, -1, line, &cur_unit()};
  }
  void observe_store(const SlotRef& slot, int src_node, const Value& v) {
    if (!opt_.observer) return;
    opt_.observer->stored(slot, eval_ref(src_node), v.is_null());
  }

  int field_decl_of(long long obj, const AstNode& access) {
    const Program::ClassRef& cls = heap_[static_cast<std::size_t>(obj)].cls;
    const CompilationUnit& u = p_.unit(cls.unit);
    for (int c : u.node(cls.node).children) {
      const AstNode& mem = u.node(c);
      if (mem.kind == NodeKind::FieldDecl && mem.text == access.text)
        return c;
    }
    abort_test("type error: class '" + u.node(cls.node).text +
               "' has no field '" + access.text + "'");
  }

  // Records `<base>_line_<L>` variable initializations on breakpoint lines.
  void maybe_record_probe(const AstNode& decl, const Value& v) {
    const std::string& name = decl.text;
    std::size_t pos = name.rfind("_line_");
    if (pos == std::string::npos) return;
    std::size_t digits = pos + 6;
    if (digits >= name.size()) return;
    int line = 0;
    for (std::size_t i = digits; i < name.size(); ++i) {
      if (name[i] < '0' || name[i] > '9') return;
      line = line * 10 + (name[i] - '0');
    }
    if (line != decl.range.start_line) return;
    auto bp = opt_.breakpoints.find(cur_unit().class_id);
    if (bp == opt_.breakpoints.end() || !bp->second.count(line)) return;
    out_->probes.push_back(
        ProbeRecord{cur_unit().class_id, line, name, v.is_null()});
  }

  const Program& p_;
  const RunOptions& opt_;
  std::vector<Object> heap_;
  std::vector<Frame> frames_;
  TestOutcome* out_ = nullptr;
  long long steps_ = 0;
  long long next_frame_id_ = 0;
  Value ret_;
  std::optional<EvalRef> ret_expr_;
};

int line_count(const std::string& source) {
  int lines = 1;
  for (char c : source)
    if (c == '\n') ++lines;
  return lines;
}

}  // namespace

std::vector<TestOutcome> run_tests(const Program& program,
                                   const RunOptions& options) {
  for (const auto& [class_id, lines] : options.breakpoints) {
    int ui = program.unit_index(class_id);
    if (ui < 0)
      throw RuntimeConfigError("breakpoint in unknown unit '" + class_id +
                               "'");
    int max_line = line_count(program.unit(ui).source);
    for (int line : lines)
      if (line < 1 || line > max_line)
        throw RuntimeConfigError("breakpoint line " + std::to_string(line) +
                                 " is outside unit '" + class_id + "'");
  }

  auto matches = [&](const Program::MethodRef& t) {
    if (options.test_filter.empty()) return true;
    std::string name = program.method_name(t);
    std::string qualified = program.class_name(t) + "." + name;
    return std::find(options.test_filter.begin(), options.test_filter.end(),
                     name) != options.test_filter.end() ||
           std::find(options.test_filter.begin(), options.test_filter.end(),
                     qualified) != options.test_filter.end();
  };
  for (const std::string& wanted : options.test_filter) {
    bool found = false;
    for (const auto& t : program.tests) {
      if (program.method_name(t) == wanted ||
          program.class_name(t) + "." + program.method_name(t) == wanted)
        found = true;
    }
    if (!found)
      throw RuntimeConfigError("no test method named '" + wanted + "'");
  }

  std::vector<TestOutcome> out;
  for (const auto& t : program.tests) {
    if (!matches(t)) continue;
    Interp interp(program, options);  // fresh heap per test
    out.push_back(interp.run_test(t));
  }
  return out;
}

}  // namespace nullcause::runtime
