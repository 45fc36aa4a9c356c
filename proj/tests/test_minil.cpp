#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "nullcause/minil/ast.hpp"
#include "nullcause/minil/parse.hpp"

using namespace nullcause;
using minil::AstNode;
using minil::CompilationUnit;
using minil::NodeKind;

namespace {

// The null-returning repository fixture used throughout the test suites.
const char* kRepoSource = R"(class Repo {
  method find(key) {
    if (key == "k") { return "v"; }

    return null;
  }
  method size(key) {
    var item = find(key);
    return len(item);
  }
}

class RepoTest {
  test method testSize() {
    var n = new Repo().size("x");
    assert n == 0;
  }
}
)";

const AstNode* find_node(const CompilationUnit& u, NodeKind k,
                         const std::string& text) {
  for (const auto& n : u.nodes)
    if (n.kind == k && n.text == text) return &n;
  return nullptr;
}

std::vector<const AstNode*> find_all(const CompilationUnit& u, NodeKind k,
                                     const std::string& text = "") {
  std::vector<const AstNode*> out;
  for (const auto& n : u.nodes)
    if (n.kind == k && (text.empty() || n.text == text)) out.push_back(&n);
  return out;
}

int offset_of(const std::string& haystack, const std::string& needle,
              int occurrence = 1) {
  std::size_t pos = 0;
  for (int i = 0; i < occurrence; ++i) {
    pos = haystack.find(needle, i == 0 ? 0 : pos + 1);
    REQUIRE(pos != std::string::npos);
  }
  return static_cast<int>(pos);
}

bool same_structure(const CompilationUnit& a, const CompilationUnit& b) {
  if (a.nodes.size() != b.nodes.size() || a.classes != b.classes) return false;
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    const AstNode& x = a.nodes[i];
    const AstNode& y = b.nodes[i];
    if (x.kind != y.kind || x.id != y.id || x.parent != y.parent ||
        x.role != y.role || x.role_index != y.role_index ||
        x.children != y.children || x.text != y.text ||
        x.is_test != y.is_test || x.decl != y.decl ||
        x.non_hoistable != y.non_hoistable)
      return false;
    if (x.kind == NodeKind::Literal &&
        (x.lit_kind != y.lit_kind || x.int_value != y.int_value ||
         x.bool_value != y.bool_value || x.str_value != y.str_value))
      return false;
  }
  return true;
}

template <class E>
std::string error_message(const std::string& source) {
  try {
    minil::parse(source, "t");
  } catch (const E& e) {
    return e.what();
  }
  return "";
}

bool contains(const std::string& s, const std::string& needle) {
  return s.find(needle) != std::string::npos;
}

// Canonical rendering of one expression, via a variable initializer inside a
// throwaway method with parameters a..f in scope.
std::string canon(const std::string& expr) {
  std::string src =
      "class C { method m(a, b, c, d, e, f) { var r = " + expr + "; } }";
  std::string printed = minil::print(minil::parse(src, "c"));
  int at = offset_of(printed, "var r = ");
  std::size_t end = printed.find(";\n", static_cast<std::size_t>(at));
  REQUIRE(end != std::string::npos);
  return printed.substr(static_cast<std::size_t>(at) + 8,
                        end - static_cast<std::size_t>(at) - 8);
}

}  // namespace

TEST_CASE("a minimal program parses to the documented arena shape") {
  auto u = minil::parse("class A {\n  method m() {\n    return null;\n  }\n}\n",
                        "a");
  REQUIRE(u.nodes.size() == 6);
  CHECK(u.class_id == "a");
  CHECK(u.classes == std::vector<int>{1});

  CHECK(u.nodes[0].kind == NodeKind::Unit);
  CHECK(u.nodes[0].parent == -1);
  CHECK(u.nodes[1].kind == NodeKind::ClassDecl);
  CHECK(u.nodes[1].text == "A");
  CHECK(u.nodes[1].role == "classes");
  CHECK(u.nodes[1].role_index == 0);
  CHECK(u.nodes[2].kind == NodeKind::MethodDecl);
  CHECK(u.nodes[2].text == "m");
  CHECK_FALSE(u.nodes[2].is_test);
  CHECK(u.nodes[3].kind == NodeKind::Block);
  CHECK(u.nodes[3].role == "body");
  CHECK(u.nodes[3].role_index == -1);
  CHECK(u.nodes[4].kind == NodeKind::Return);
  CHECK(u.nodes[4].role == "stmts");
  CHECK(u.nodes[4].role_index == 0);
  CHECK(u.nodes[5].kind == NodeKind::Literal);
  CHECK(u.nodes[5].lit_kind == minil::LitKind::Null);
  CHECK(u.nodes[5].role == "value");

  for (const auto& n : u.nodes) {
    CHECK(n.id == &n - u.nodes.data());
    CHECK(n.range.class_id == "a");
    if (n.id > 0) CHECK(n.parent < n.id);  // ids are pre-order
    for (std::size_t i = 1; i < n.children.size(); ++i)
      CHECK(n.children[i - 1] < n.children[i]);
  }
}

TEST_CASE("parsing is deterministic") {
  auto a = minil::parse(kRepoSource, "repo");
  auto b = minil::parse(kRepoSource, "repo");
  CHECK(same_structure(a, b));
  REQUIRE(a.nodes.size() == b.nodes.size());
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    CHECK(a.nodes[i].range.start == b.nodes[i].range.start);
    CHECK(a.nodes[i].range.length == b.nodes[i].range.length);
    CHECK(a.nodes[i].range.start_line == b.nodes[i].range.start_line);
  }
}

TEST_CASE("simple names resolve to parameters, locals, and fields") {
  auto u = minil::parse(R"(class A {
  field count;
  method bump(step) {
    var next = count + step;
    count = next;
    return count;
  }
  method shadow(count) {
    return count;
  }
}
)",
                        "a");

  const AstNode* field = find_node(u, NodeKind::FieldDecl, "count");
  const AstNode* bump = find_node(u, NodeKind::MethodDecl, "bump");
  const AstNode* shadow_param = nullptr;
  for (const auto& n : u.nodes)
    if (n.kind == NodeKind::Param && n.text == "count") shadow_param = &n;
  REQUIRE(field);
  REQUIRE(bump);
  REQUIRE(shadow_param);

  for (const AstNode* use : find_all(u, NodeKind::SimpleName, "step"))
    CHECK(u.node(use->decl).kind == NodeKind::Param);
  for (const AstNode* use : find_all(u, NodeKind::SimpleName, "next"))
    CHECK(u.node(use->decl).kind == NodeKind::VarDecl);

  // Inside bump, "count" is the field; inside shadow, it is the parameter.
  auto uses = find_all(u, NodeKind::SimpleName, "count");
  REQUIRE(uses.size() == 4);
  int in_shadow = 0;
  for (const AstNode* use : uses) {
    if (use->decl == shadow_param->id) {
      ++in_shadow;
    } else {
      CHECK(use->decl == field->id);
    }
  }
  CHECK(in_shadow == 1);
}

TEST_CASE("unresolved names are rejected with a position") {
  std::string src = "class A {\n  method m() {\n    return missing;\n  }\n}\n";
  CHECK_THROWS_AS(minil::parse(src, "a"), minil::NameError);
  std::string msg = error_message<minil::NameError>(src);
  CHECK(contains(msg, "unresolved name 'missing'"));
  CHECK(contains(msg, "line 3"));
  CHECK(contains(msg, "column 12"));
}

TEST_CASE("declaration conflicts are rejected") {
  CHECK(contains(error_message<minil::NameError>(
                     "class A { } class A { }"),
                 "duplicate class 'A'"));
  CHECK(contains(error_message<minil::NameError>(
                     "class A { field x; field x; }"),
                 "duplicate field 'x'"));
  CHECK(contains(error_message<minil::NameError>(
                     "class A { method m() { } method m(p) { } }"),
                 "duplicate method 'm'"));
  CHECK(contains(error_message<minil::NameError>(
                     "class A { method m(p, p) { } }"),
                 "duplicate parameter 'p'"));
  CHECK(contains(error_message<minil::NameError>(
                     "class A { method m() { var x = 1; var x = 2; } }"),
                 "'x' is already declared"));
  CHECK(contains(error_message<minil::NameError>(
                     "class A { method m(p) { var p = 1; } }"),
                 "'p' is already declared"));
  // A nested block cannot redeclare an outer local either.
  CHECK(contains(error_message<minil::NameError>(
                     "class A { method m(c) { var x = 1; if (c) { var x = 2; } } }"),
                 "'x' is already declared"));
  CHECK(contains(error_message<minil::NameError>(
                     "class A { method len(s) { return 0; } }"),
                 "reserved for a builtin"));
  CHECK(contains(error_message<minil::NameError>(
                     "class A { test method t(p) { } }"),
                 "must take no parameters"));
}

TEST_CASE("the repository fixture parses with the expected layout") {
  auto u = minil::parse(kRepoSource, "repo");

  REQUIRE(u.classes.size() == 2);
  CHECK(u.node(u.classes[0]).text == "Repo");
  CHECK(u.node(u.classes[1]).text == "RepoTest");

  const AstNode* find = find_node(u, NodeKind::MethodDecl, "find");
  const AstNode* size = find_node(u, NodeKind::MethodDecl, "size");
  const AstNode* test = find_node(u, NodeKind::MethodDecl, "testSize");
  REQUIRE(find);
  REQUIRE(size);
  REQUIRE(test);
  CHECK_FALSE(find->is_test);
  CHECK_FALSE(size->is_test);
  CHECK(test->is_test);

  // Line spans drive method_range facts; keep them pinned.
  CHECK(find->range.start_line == 2);
  CHECK(find->range.end_line == 6);
  CHECK(size->range.start_line == 7);
  CHECK(size->range.end_line == 10);
  CHECK(test->range.start_line == 14);
  CHECK(test->range.end_line == 17);

  auto returns = find_all(u, NodeKind::Return);
  REQUIRE(returns.size() == 3);  // "v", null, len(item)
  const AstNode* null_return = nullptr;
  for (const AstNode* r : returns) {
    const AstNode& value = u.node(r->children.at(0));
    if (value.kind == NodeKind::Literal && value.lit_kind == minil::LitKind::Null)
      null_return = r;
  }
  REQUIRE(null_return);
  CHECK(null_return->range.start_line == 5);

  const AstNode* item_decl = find_node(u, NodeKind::VarDecl, "item");
  REQUIRE(item_decl);
  CHECK(item_decl->range.start_line == 8);
  CHECK(u.node(item_decl->children.at(0)).kind == NodeKind::MethodInvoc);

  const AstNode* len_call = find_node(u, NodeKind::BuiltinInvoc, "len");
  REQUIRE(len_call);
  CHECK(len_call->range.start_line == 9);

  const AstNode* n_decl = find_node(u, NodeKind::VarDecl, "n");
  REQUIRE(n_decl);
  CHECK(n_decl->range.start_line == 15);
  auto asserts = find_all(u, NodeKind::Assert);
  REQUIRE(asserts.size() == 1);
  CHECK(asserts[0]->range.start_line == 16);

  // The dotted call hangs off the constructor expression.
  const AstNode* dotted = find_node(u, NodeKind::MethodInvoc, "size");
  REQUIRE(dotted);
  REQUIRE_FALSE(dotted->children.empty());
  const AstNode& receiver = u.node(dotted->children[0]);
  CHECK(receiver.role == "receiver");
  CHECK(receiver.role_index == -1);
  CHECK(receiver.kind == NodeKind::NewObject);
  CHECK(receiver.text == "Repo");
}

TEST_CASE("source ranges pick out the exact text") {
  auto u = minil::parse(kRepoSource, "repo");
  const AstNode* len_call = find_node(u, NodeKind::BuiltinInvoc, "len");
  REQUIRE(len_call);
  CHECK(u.text_of(*len_call) == "len(item)");
  const AstNode* dotted = find_node(u, NodeKind::MethodInvoc, "size");
  REQUIRE(dotted);
  CHECK(u.text_of(*dotted) == "new Repo().size(\"x\")");
  const AstNode* item_decl = find_node(u, NodeKind::VarDecl, "item");
  REQUIRE(item_decl);
  CHECK(u.text_of(*item_decl) == "var item = find(key);");
}

TEST_CASE("node_at returns the innermost covering node") {
  auto u = minil::parse(kRepoSource, "repo");
  std::string src = u.source;

  int item_in_len = offset_of(src, "len(item)") + 4;
  const AstNode& item = minil::node_at(u, item_in_len, 4);
  CHECK(item.kind == NodeKind::SimpleName);
  CHECK(item.text == "item");
  CHECK(u.node(item.decl).kind == NodeKind::VarDecl);

  // The whole file resolves to the unit root.
  const AstNode& root = minil::node_at(u, 0, static_cast<int>(src.size()));
  CHECK(root.kind == NodeKind::Unit);

  // A range spanning the call picks the call, not the statement around it.
  const AstNode& call = minil::node_at(u, offset_of(src, "len(item)"), 9);
  CHECK(call.kind == NodeKind::BuiltinInvoc);

  CHECK_THROWS_AS(minil::node_at(u, static_cast<int>(src.size()) + 10, 1),
                  minil::NotFound);
  CHECK_THROWS_AS(minil::node_at(u, -2, 1), minil::NotFound);
}

TEST_CASE("node_at distinguishes identical texts by offset") {
  auto u = minil::parse(R"(class A {
  method h(a, b) {
    return a;
  }
  method g(x) {
    return h(x, x);
  }
}
)",
                        "a");
  int first = offset_of(u.source, "h(x, x)") + 2;
  int second = first + 3;
  const AstNode& n1 = minil::node_at(u, first, 1);
  const AstNode& n2 = minil::node_at(u, second, 1);
  CHECK(n1.kind == NodeKind::SimpleName);
  CHECK(n2.kind == NodeKind::SimpleName);
  CHECK(n1.id != n2.id);
  CHECK(n1.range.start == first);
  CHECK(n2.range.start == second);
  CHECK(n1.role == "args");
  CHECK(n1.role_index == 0);
  CHECK(n2.role_index == 1);
}

TEST_CASE("printing is canonical and parse-stable") {
  CHECK(minil::print(minil::parse("class  A  { }", "a")) == "class A {\n}\n");

  const char* sink = R"(class Util {
  field total;
  field name;

  method bump(step) {
    total = total + step;
    return total;
  }

  method greet(who) {
    if (who == null) {
      return "nobody";
    } else if (len(who) < 1) {
      return concat("hi, ", "mystery");
    } else {
      return concat("hi, ", who);
    }
  }

  method spin(n) {
    var i = 0;
    var acc = "";
    while (i < n && !(acc == null)) {
      acc = concat(acc, "x");
      i = i + 1;
    }
    return acc;
  }

  method misc(k) {
    var t = parse_int("12") * 2 - 1;
    if (t != 23) {
      t = 0 - t;
    } else if (t == 23) {
      bump(t);
    } else {
      bump(0 - t);
    }
    while (t < k) {
      t = t + 1;
    }
    return;
  }

  method make() {
    var u = new Util();
    u.name = concat(this.name, "!");
    return u;
  }

  test method testAll() {
    var u = new Util();
    var s = u.spin(3);
    var e = "a\"b\\c\nd";
    assert len(s) == 3;
  }
}
)";

  for (const char* src : {kRepoSource, sink}) {
    auto parsed = minil::parse(src, "u");
    std::string printed = minil::print(parsed);
    auto reparsed = minil::parse(printed, "u");
    CHECK(same_structure(parsed, reparsed));
    // Printing an already canonical unit is the identity.
    CHECK(minil::print(reparsed) == printed);
  }
}

TEST_CASE("printing inserts only the parentheses precedence demands") {
  CHECK(canon("a + b * c") == "a + b * c");
  CHECK(canon("(a + b) * c") == "(a + b) * c");
  CHECK(canon("((a))") == "a");
  CHECK(canon("a - b - c") == "a - b - c");
  CHECK(canon("a - (b - c)") == "a - (b - c)");
  CHECK(canon("!(a == null) && b < c + 1 || d") ==
        "!(a == null) && b < c + 1 || d");
  CHECK(canon("(a || b) && c") == "(a || b) && c");
  CHECK(canon("!!a") == "!!a");
  CHECK(canon("!a && b") == "!a && b");
  CHECK(canon("(a + b).f") == "(a + b).f");
  CHECK(canon("this.f") == "this.f");
  CHECK(canon("new B().m(a)") == "new B().m(a)");
  CHECK(canon("concat(a, concat(b, \"x\"))") == "concat(a, concat(b, \"x\"))");
  CHECK(canon("a == (b == c)") == "a == (b == c)");
  CHECK(canon("a * (b - c) * d") == "a * (b - c) * d");
}

TEST_CASE("while conditions and short-circuit right operands are marked") {
  auto u = minil::parse(R"(class A {
  method m(a, b, n) {
    var i = 0;
    while (i < n && a == null) {
      i = i + 1;
    }
    if (a == b && b == null) {
      return a && b;
    }
    return i;
  }
}
)",
                        "a");

  auto whiles = find_all(u, NodeKind::While);
  REQUIRE(whiles.size() == 1);
  const AstNode& cond = u.node(whiles[0]->children[0]);
  CHECK(cond.role == "cond");
  // Every node of a while condition is non-hoistable, left operands included.
  std::vector<int> stack{cond.id};
  while (!stack.empty()) {
    const AstNode& n = u.node(stack.back());
    stack.pop_back();
    CHECK(n.non_hoistable);
    for (int c : n.children) stack.push_back(c);
  }
  // The loop body stays hoistable.
  for (int s : u.node(whiles[0]->children[1]).children)
    CHECK_FALSE(u.node(s).non_hoistable);

  auto ifs = find_all(u, NodeKind::If);
  REQUIRE(ifs.size() == 1);
  const AstNode& if_cond = u.node(ifs[0]->children[0]);
  CHECK(if_cond.kind == NodeKind::BinaryOp);
  CHECK(if_cond.text == "&&");
  CHECK_FALSE(if_cond.non_hoistable);
  CHECK_FALSE(u.node(if_cond.children[0]).non_hoistable);  // a == b
  CHECK(u.node(if_cond.children[1]).non_hoistable);        // b == null
  CHECK(u.node(u.node(if_cond.children[1]).children[0]).non_hoistable);
}

TEST_CASE("else-if conditions are marked, plain if conditions are not") {
  auto u = minil::parse(R"(class A {
  method m(a, b) {
    if (a == 1) {
      return 1;
    } else if (b == 2) {
      return 2;
    } else {
      return 3;
    }
  }
}
)",
                        "a");

  auto ifs = find_all(u, NodeKind::If);
  REQUIRE(ifs.size() == 2);
  // Outer if: condition evaluates unconditionally, stays hoistable.
  const AstNode& outer_cond = u.node(ifs[0]->children[0]);
  CHECK(outer_cond.role == "cond");
  CHECK_FALSE(outer_cond.non_hoistable);
  CHECK_FALSE(u.node(outer_cond.children[0]).non_hoistable);
  // The else-if condition only runs when the first test fails.
  const AstNode& inner = *ifs[1];
  CHECK(inner.role == "else");
  const AstNode& inner_cond = u.node(inner.children[0]);
  CHECK(inner_cond.role == "cond");
  CHECK(inner_cond.non_hoistable);
  CHECK(u.node(inner_cond.children[0]).non_hoistable);  // b
  // Branch bodies are unaffected.
  for (int c : inner.children)
    if (u.node(c).kind == NodeKind::Block)
      for (int s : u.node(c).children)
        CHECK_FALSE(u.node(s).non_hoistable);
}

TEST_CASE("argument and member slots are dense and ordered") {
  auto u = minil::parse(R"(class A {
  field x;
  method h(a, b, c) {
    return a;
  }
  field y;
  method g(p) {
    return h(p, p, p);
  }
}
)",
                        "a");

  const AstNode* call = find_node(u, NodeKind::MethodInvoc, "h");
  REQUIRE(call);
  REQUIRE(call->children.size() == 3);
  for (int i = 0; i < 3; ++i) {
    const AstNode& arg = u.node(call->children[static_cast<std::size_t>(i)]);
    CHECK(arg.role == "args");
    CHECK(arg.role_index == i);
  }

  const AstNode* h = find_node(u, NodeKind::MethodDecl, "h");
  REQUIRE(h);
  int pi = 0;
  for (int c : h->children) {
    if (u.node(c).kind != NodeKind::Param) continue;
    CHECK(u.node(c).role == "params");
    CHECK(u.node(c).role_index == pi++);
  }
  CHECK(pi == 3);

  // Fields and methods are indexed independently, in declaration order.
  const AstNode& cls = u.node(u.classes[0]);
  std::vector<std::pair<std::string, int>> members;
  for (int c : cls.children)
    members.emplace_back(u.node(c).role, u.node(c).role_index);
  CHECK(members == std::vector<std::pair<std::string, int>>{
                       {"fields", 0}, {"methods", 0}, {"fields", 1},
                       {"methods", 1}});
}

TEST_CASE("parse errors carry positions") {
  CHECK(contains(error_message<minil::ParseError>(
                     "class A { method m() { return 1 } }"),
                 "expected ';'"));
  CHECK(contains(error_message<minil::ParseError>(
                     "class A { method m() { var x; } }"),
                 "expected '='"));
  CHECK(contains(error_message<minil::ParseError>(
                     "class A { method m() { 1 = 2; } }"),
                 "invalid assignment target"));
  CHECK(contains(error_message<minil::ParseError>("class A { method m() { }"),
                 "end of input"));
  CHECK(contains(error_message<minil::ParseError>(
                     "class A { method m() { var s = \"oops; } }"),
                 "unterminated string"));
  CHECK(contains(error_message<minil::ParseError>(
                     "class A { method m() { var s = a @ b; } }"),
                 "unexpected character '@'"));

  std::string src = "class A {\n  method m() {\n    return 1\n  }\n}\n";
  try {
    minil::parse(src, "a");
    FAIL("expected a parse error");
  } catch (const minil::ParseError& e) {
    CHECK(e.line == 4);  // the '}' where ';' was expected
    CHECK(e.col == 3);
  }
}

TEST_CASE("kind predicates") {
  CHECK(std::string(minil::kind_name(NodeKind::BuiltinInvoc)) ==
        "BuiltinInvoc");
  CHECK(minil::is_expression(NodeKind::FieldAccess));
  CHECK(minil::is_expression(NodeKind::Literal));
  CHECK_FALSE(minil::is_expression(NodeKind::VarDecl));
  CHECK_FALSE(minil::is_expression(NodeKind::Block));
}
