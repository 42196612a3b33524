#include "doctest.h"

#include "lang/ast.hpp"
#include "model/error.hpp"

using namespace simclone;
using namespace simclone::lang;

namespace {

std::size_t count_statements(const std::vector<Statement>& body) {
  std::size_t n = 0;
  for (const auto& s : body) {
    ++n;
    for (const auto& c : s.clauses) n += count_statements(c.body);
  }
  return n;
}

}  // namespace

TEST_CASE("python: functions, classes and module items") {
  const auto file = parse_python(R"(import sys
from math import sqrt as root
LIMIT = 10

def area(w, h):
    total = w * h
    if total > LIMIT:
        total -= 1
    elif total < 0:
        total = 0
    else:
        pass
    return total

class Shape(object):
    def __init__(self, n):
        self.n = n
    def sides(self):
        return self.n
)");
  REQUIRE(file.functions.size() == 3);
  CHECK(file.functions[0].qualified_name == "area");
  CHECK(file.functions[0].params.size() == 2);
  CHECK(file.functions[0].body.size() == 3);
  const auto& cond = file.functions[0].body[1];
  CHECK(cond.kind == StmtKind::conditional);
  CHECK(cond.clauses.size() == 3);
  CHECK(file.functions[1].qualified_name == "Shape.__init__");
  CHECK(file.functions[1].class_name == "Shape");
  REQUIRE(file.module_items.size() == 5);
  CHECK(file.module_items[0].kind == ModuleItem::Kind::import);
  CHECK(file.module_items[1].names == std::vector<std::string>{"root"});
  CHECK(file.module_items[2].kind == ModuleItem::Kind::constant);
  CHECK(file.module_items[3].kind == ModuleItem::Kind::definition);
  CHECK(file.find_class("Shape") != nullptr);
  CHECK(file.find_class("Shape")->instance_methods.size() == 2);
}

TEST_CASE("python: python 2 syntax and literals") {
  const auto file = parse_python(R"(def f(n):
    print "value", n
    try:
        x = int(n) % -3
    except ValueError, e:
        x = 0.5
    s = [i * i for i in range(n) if i % 2]
    return x
)");
  REQUIRE(file.functions.size() == 1);
  CHECK(count_statements(file.functions[0].body) == 6);
  bool saw_negative = false;
  for (const auto& lit : file.literals) saw_negative = saw_negative || (lit.kind == NodeKind::int_lit && lit.text == "-3");
  CHECK(saw_negative);
}

TEST_CASE("python: syntax errors carry the path and position") {
  try {
    parse_python("def f(:\n  pass\n", "a.py");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::parse);
    CHECK(std::string(e.what()).starts_with("a.py:1:"));
  }
  CHECK_THROWS_AS(parse_python("x = 'open\n"), Error);
}

TEST_CASE("java: classes, fields, methods and statements") {
  const auto file = parse_java(R"(package demo;
import java.util.*;

public class Main {
  static int counter = 0;
  private double[] data;
  public Main(int n, String label) { data = new double[n]; }

  public static int sum(int[] a, int lo) {
    int total = 0;
    for (int i = lo; i < a.length; i++) {
      if (a[i] > 0) total += a[i]; else { continue; }
    }
    for (int v : a) total += v >> 1;
    Map<String, List<Integer>> m = new HashMap<>();
    int x = (int) 3.5 + (total >>> 2);
    switch (x) {
      case 1: case 2: x++; break;
      default: x = -1;
    }
    try { x /= 0; } catch (ArithmeticException | NullPointerException e) { x = 1; } finally { x--; }
    return total;
  }

  int get() { return this.data.length; }
}
)");
  REQUIRE(file.functions.size() == 2);
  const auto& sum = file.functions[0];
  CHECK(sum.qualified_name == "Main.sum");
  CHECK(sum.return_type == "int");
  CHECK(sum.is_static);
  REQUIRE(sum.params.size() == 2);
  CHECK(sum.params[0].declared_type == "int[]");
  CHECK(sum.body.size() == 8);
  CHECK(sum.body[0].kind == StmtKind::declaration);
  CHECK(sum.body[1].kind == StmtKind::loop);
  CHECK(sum.body[1].clauses[0].header.kind == NodeKind::for_classic);
  CHECK(sum.body[2].clauses[0].header.kind == NodeKind::for_in);
  CHECK(sum.body[4].head.children.at(0).kind == NodeKind::declarator);
  CHECK(sum.body[5].clauses.size() == 2);
  CHECK(sum.body[6].kind == StmtKind::try_stmt);
  CHECK(sum.body[7].terminates);
  CHECK_FALSE(file.functions[1].is_static);
  const auto* cls = file.find_class("Main");
  REQUIRE(cls != nullptr);
  REQUIRE(cls->fields.size() == 2);
  CHECK(cls->fields[0].is_static);
  CHECK(cls->fields[1].visibility == Visibility::private_access);
  REQUIRE(cls->constructors.size() == 1);
  CHECK(cls->constructors[0].size() == 2);
}

TEST_CASE("java: shifts versus generic closers") {
  const auto file = parse_java(R"(class A { static long f(long v) { List<List<Integer>> xs = null; return v >> 2 > 1 ? v >>> 3 : v; } })");
  REQUIRE(file.functions.size() == 1);
  const auto& ret = file.functions[0].body[1].head;
  REQUIRE(ret.kind == NodeKind::return_stmt);
  const auto& ternary = ret.children.at(0);
  CHECK(ternary.kind == NodeKind::ternary);
  CHECK(ternary.children[1].text == ">");
  CHECK(ternary.children[1].children[0].text == ">>");
  CHECK(ternary.children[0].text == ">>>");
}

TEST_CASE("java: parse errors") {
  CHECK_THROWS_AS(parse_java("class A { void f() { int x = ; } }", "A.java"), Error);
}
