#include "doctest.h"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "lang/ast.hpp"
#include "segment/segmenter.hpp"
#include "synth/synthesizer.hpp"
#include "synth/type_infer.hpp"

using namespace simclone;
using namespace simclone::synth;

namespace {

std::shared_ptr<const lang::ParsedFile> parse(const std::string& text, LanguageId lang, const std::string& path) {
  return std::make_shared<const lang::ParsedFile>(lang::parse_source(text, lang, path));
}

std::vector<segment::Snippet> snippets_of(const std::string& text, LanguageId lang, const std::string& path = "t") {
  return segment::segment_file(parse(text, lang, path), 1);
}

// The snippet of function `fn` whose text starts with `prefix` and has `count` statements.
segment::Snippet pick(const std::vector<segment::Snippet>& snips, const std::string& fn, const std::string& prefix,
                      std::size_t count) {
  for (const auto& s : snips) {
    if (s.function->name == fn && s.window.count == count && s.text().starts_with(prefix)) return s;
  }
  FAIL("no snippet " << fn << " / " << prefix << " / " << count);
  return snips.front();
}

segment::Snippet whole(const std::vector<segment::Snippet>& snips, const std::string& fn) {
  for (const auto& s : snips) {
    if (s.function->name == fn && s.whole_method()) return s;
  }
  FAIL("no whole-method snippet for " << fn);
  return snips.front();
}

// Straight-line reference walk: args are names read before any definition,
// returns are defined names whose last definition is not a literal.
struct LineStmt {
  std::string target;
  std::vector<std::string> reads;
  bool literal = false;
};

std::pair<std::vector<std::string>, std::vector<std::string>> straight_line_oracle(const std::vector<LineStmt>& prog) {
  std::vector<std::string> args, defs;
  std::set<std::string> defined;
  std::map<std::string, bool> last_literal;
  for (const auto& s : prog) {
    for (const auto& r : s.reads) {
      if (!defined.count(r) && std::find(args.begin(), args.end(), r) == args.end()) args.push_back(r);
    }
    if (std::find(defs.begin(), defs.end(), s.target) == defs.end()) defs.push_back(s.target);
    defined.insert(s.target);
    last_literal[s.target] = s.literal;
  }
  std::vector<std::string> rets;
  for (const auto& d : defs) {
    if (!last_literal[d]) rets.push_back(d);
  }
  return {args, rets};
}

std::string render_line(const LineStmt& s) {
  if (s.literal) return s.target + " = 7";
  if (s.reads.size() == 1) return s.target + " = " + s.reads[0] + " * 3";
  return s.target + " = " + s.reads[0] + " + " + s.reads[1];
}

}  // namespace

TEST_CASE("synth: constant definitions are not returned") {
  const auto snips = snippets_of("def f(z):\n    x = 5\n    y = x + z\n", LanguageId::python());
  const auto io = infer_io_variables(whole(snips, "f"));
  CHECK(io.args == std::vector<std::string>{"z"});
  CHECK(io.returns == std::vector<std::string>{"y"});
}

TEST_CASE("synth: straight-line dataflow agrees with the reference walk") {
  std::mt19937_64 rng(7);
  const std::vector<std::string> names = {"a", "b", "c", "d", "e"};
  auto pick_name = [&] { return names[rng() % names.size()]; };
  for (int round = 0; round < 200; ++round) {
    std::vector<LineStmt> prog(2 + rng() % 6);
    for (auto& s : prog) {
      s.target = pick_name();
      const int shape = static_cast<int>(rng() % 3);
      s.literal = shape == 0;
      if (shape >= 1) s.reads.push_back(pick_name());
      if (shape == 2) s.reads.push_back(pick_name());
    }
    std::string text = "def g(p):\n";
    for (const auto& s : prog) text += "    " + render_line(s) + "\n";
    const auto snips = snippets_of(text, LanguageId::python());
    const auto io = infer_io_variables(whole(snips, "g"));
    const auto [args, rets] = straight_line_oracle(prog);
    INFO(text);
    CHECK(io.errors.empty());
    CHECK(io.args == args);
    CHECK(io.returns == rets);
  }
}

TEST_CASE("synth: running-sum loop takes the array and returns the sums") {
  const std::string src =
      "def func_db8e(a):\n"
      "    n = len(a)\n"
      "    sum0 = [0] * (n + 1)\n"
      "    for i in xrange(n):\n"
      "        sum0[i + 1] = sum0[i] + a[i]\n"
      "    allv = sum0[-1]\n"
      "    return allv\n";
  const auto snips = snippets_of(src, LanguageId::python(), "sum.py");
  const auto io = infer_io_variables(pick(snips, "func_db8e", "n = len(a)", 4));
  CHECK(io.args == std::vector<std::string>{"a"});
  CHECK(std::count(io.returns.begin(), io.returns.end(), "sum0") == 1);
  CHECK(std::count(io.returns.begin(), io.returns.end(), "allv") == 1);
  CHECK(std::count(io.returns.begin(), io.returns.end(), "i") == 0);

  IdRegistry ids;
  SynthConfig cfg;
  const auto res = synthesize(whole(snips, "func_db8e"), cfg, ids);
  REQUIRE(res.functions.size() == 1);
  const auto& f = res.functions[0];
  CHECK(f.arg_names == std::vector<std::string>{"a"});
  CHECK(type_token(f.signature.args[0]) == "arr<i64>");
  CHECK(f.source_text.find("def " + f.id + "(a):\n    n = len(a)") != std::string::npos);
  CHECK(f.source_text.find("    return allv\n") != std::string::npos);
}

TEST_CASE("synth: library sum snippet") {
  const std::string src =
      "def func_43df(items):\n"
      "    _sum = sum(items)\n"
      "    j = len(items) - 1\n"
      "    return _sum\n";
  const auto snips = snippets_of(src, LanguageId::python());
  IdRegistry ids;
  const auto res = synthesize(whole(snips, "func_43df"), SynthConfig{}, ids);
  REQUIRE(res.functions.size() == 1);
  CHECK(res.functions[0].return_var == "_sum");
  CHECK(type_token(res.functions[0].signature.args[0]) == "arr<i64>");
  CHECK(type_token(res.functions[0].signature.ret) == "i64");
}

TEST_CASE("synth: dynamic types follow literal evidence") {
  struct Case {
    std::string body;
    std::string var;
    std::string token;
  };
  // hand oracle
  const std::vector<Case> cases = {
      {"if n <= 1:\n        y = n\n    y = 2", "n", "i64"},
      {"print a\n    b = 1", "a", "any"},
      {"y = xs[0] + 1\n    z = 2", "xs", "arr<i64>"},
      {"y = x * 2.5\n    z = 1", "x", "f64"},
      {"y = s + 'abc'\n    z = 1", "s", "s"},
      {"y = len(xs)\n    z = 1", "xs", "arr<any>"},
      {"y = s.strip()\n    z = 1", "s", "s"},
      {"y = m % 3\n    z = 1", "m", "i64"},
      {"for i in range(k):\n        y = i\n    z = 1", "k", "i64"},
      {"y = sum(xs)\n    z = 1", "xs", "arr<i64>"},
      {"f = open(p)\n    z = 1", "p", "file"},
      {"y = g[i][j] + 1\n    z = 1", "g", "arr<arr<i64>>"},
      {"y = g[i][j] + 1\n    z = 1", "i", "i64"},
      {"y = 0\n    y = y + q\n    y = y / 2", "y", "f64"},
      {"y = x + 1\n    w = x + 0.5", "x", "f64"},
  };
  for (const auto& c : cases) {
    const std::string text = "def h(arg):\n    " + c.body + "\n";
    INFO(text);
    const auto file = parse(text, LanguageId::python(), "t.py");
    const PythonTypes types(file->functions.at(0).body);
    CHECK(type_token(types.of(c.var)) == c.token);
  }
}

TEST_CASE("synth: fib argument typed int") {
  const std::string src =
      "def fib(n):\n"
      "    if n <= 1:\n"
      "        return n\n"
      "    return fib(n-1) + fib(n-2)\n";
  const auto snips = snippets_of(src, LanguageId::python());
  IdRegistry ids;
  const auto res = synthesize(whole(snips, "fib"), SynthConfig{}, ids);
  REQUIRE(res.functions.size() == 1);
  CHECK(canonical_signature(res.functions[0].signature) == "a:i64;r:i64");
}

TEST_CASE("synth: nested return without a trailing one is rejected") {
  const std::string src =
      "def f(n):\n"
      "    if n <= 1:\n"
      "        return n\n"
      "    m = n * 2\n";
  const auto snips = snippets_of(src, LanguageId::python());
  IdRegistry ids;
  const auto res = synthesize(whole(snips, "f"), SynthConfig{}, ids);
  CHECK(res.functions.empty());
  CHECK(res.stats.synthesis_errors == 1);
}

TEST_CASE("synth: self and unresolvable callees are rejected") {
  const std::string src =
      "class K:\n"
      "    def m(self, x):\n"
      "        y = self.v + x\n"
      "        z = helper(y)\n";
  const auto snips = snippets_of(src, LanguageId::python());
  IdRegistry ids;
  CHECK(synthesize(pick(snips, "m", "y = self.v", 1), SynthConfig{}, ids).stats.synthesis_errors == 1);
  CHECK(synthesize(pick(snips, "m", "z = helper", 1), SynthConfig{}, ids).stats.synthesis_errors == 1);
}

TEST_CASE("synth: all-constant snippet is dropped") {
  const auto snips = snippets_of("def f(q):\n    x = 5\n    y = 'a'\n", LanguageId::python());
  IdRegistry ids;
  const auto res = synthesize(whole(snips, "f"), SynthConfig{}, ids);
  CHECK(res.functions.empty());
  CHECK(res.stats.no_return == 1);
}

TEST_CASE("synth: module context is replicated") {
  const std::string src =
      "import math\n"
      "LIMIT = 10\n"
      "def sq(v):\n"
      "    return v * v\n"
      "def f(x):\n"
      "    r = math.sqrt(x) + sq(LIMIT)\n"
      "    t = r + 1\n";
  const auto snips = snippets_of(src, LanguageId::python());
  IdRegistry ids;
  SynthConfig cfg;
  const auto res = synthesize(whole(snips, "f"), cfg, ids);
  REQUIRE(res.functions.size() == 2);
  const auto& text = res.functions[0].source_text;
  CHECK(text.starts_with("import math\nLIMIT = 10\ndef sq(v):\n    return v * v\n"));
  CHECK(res.functions[0].arg_names == std::vector<std::string>{"x"});
}

TEST_CASE("synth: variables not assigned on every path become arguments") {
  const std::string src =
      "def f(c, k):\n"
      "    if c > 0:\n"
      "        v = k + 1\n"
      "    w = c * 2\n";
  const auto snips = snippets_of(src, LanguageId::python());
  IdRegistry ids;
  SynthConfig cfg;
  cfg.permute = false;
  const auto res = synthesize(whole(snips, "f"), cfg, ids);
  REQUIRE(res.functions.size() == 2);
  CHECK(res.functions[0].return_var == "v");
  CHECK(res.functions[0].arg_names == std::vector<std::string>{"c", "k", "v"});
  CHECK(res.functions[1].return_var == "w");
  CHECK(res.functions[1].arg_names == std::vector<std::string>{"c", "k"});
}

TEST_CASE("synth: argument limit drops wide snippets") {
  const auto snips = snippets_of("def f(a):\n    x = a + b + c\n    y = d + e + g\n", LanguageId::python());
  IdRegistry ids;
  SynthConfig cfg;
  cfg.args_max = 5;
  const auto res = synthesize(whole(snips, "f"), cfg, ids);
  CHECK(res.functions.empty());
  CHECK(res.stats.too_many_args == 2);
  cfg.args_max = 6;
  CHECK(synthesize(whole(snips, "f"), cfg, ids).stats.base_functions == 2);
}

TEST_CASE("synth: three arguments give six variants") {
  const auto snips = snippets_of("def f(a):\n    x = a + b * 2\n    y = x - c\n", LanguageId::python());
  IdRegistry ids;
  SynthConfig cfg;
  const auto res = synthesize(pick(snips, "f", "x = a", 2), cfg, ids);
  const auto y = std::count_if(res.functions.begin(), res.functions.end(),
                               [](const SynthesizedFunction& f) { return f.return_var == "y"; });
  CHECK(y == 6);
  std::set<std::vector<std::size_t>> perms;
  std::set<std::string> idset;
  for (const auto& f : res.functions) {
    if (f.return_var != "y") continue;
    perms.insert(f.permutation);
    idset.insert(f.id);
    auto sorted = f.permutation;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<std::size_t>{0, 1, 2});
    for (std::size_t k = 0; k < 3; ++k) {
      const std::vector<std::string> base = {"a", "b", "c"};
      CHECK(f.arg_names[k] == base[f.permutation[k]]);
    }
  }
  CHECK(perms.size() == 6);
  CHECK(idset.size() == 6);
  CHECK(res.functions.front().permutation == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("synth: one argument gives one variant") {
  const auto snips = snippets_of("def f(a):\n    x = a + 1\n    y = x * 2\n", LanguageId::python());
  IdRegistry ids;
  const auto res = synthesize(whole(snips, "f"), SynthConfig{}, ids);
  CHECK(res.functions.size() == 2);
  for (const auto& f : res.functions) CHECK(f.id == f.base_id);
}

namespace {

const char* kDivide = R"(public class Div {
    public int divide_simple(int a, int b) {
        if (b == 0) return 0;
        return a / b;
    }
    public int divide_complex(int divisor, int dividend) {
        if (divisor == 0) return 0;
        int quotient = 0;
        while (dividend >= divisor) {
            dividend = dividend - divisor;
            quotient++;
        }
        return quotient;
    }
}
)";

int divide_simple(int a, int b) { return b == 0 ? 0 : a / b; }
int divide_complex(int divisor, int dividend) {
  if (divisor == 0) return 0;
  int q = 0;
  while (dividend >= divisor) {
    dividend -= divisor;
    ++q;
  }
  return q;
}

}  // namespace

TEST_CASE("synth: reversed variant of the division pair matches") {
  const auto snips = snippets_of(kDivide, LanguageId::java(), "Div.java");
  IdRegistry ids;
  const auto res = synthesize(whole(snips, "divide_complex"), SynthConfig{}, ids);
  REQUIRE(res.functions.size() == 2);
  const auto& base = res.functions[0];
  const auto& rev = res.functions[1];
  CHECK(base.arg_names == std::vector<std::string>{"divisor", "dividend"});
  CHECK(rev.arg_names == std::vector<std::string>{"dividend", "divisor"});
  CHECK(rev.source_text.find("(int dividend, int divisor)") != std::string::npos);
  CHECK(rev.entry == rev.id + "." + rev.id);
  // apply each variant's argument map to the shared input (5, 2)
  const std::vector<int> input = {5, 2};
  auto run = [&](const SynthesizedFunction& f) {
    std::vector<int> base_args(2);
    for (std::size_t k = 0; k < 2; ++k) base_args[f.permutation[k]] = input[k];
    return divide_complex(base_args[0], base_args[1]);
  };
  CHECK(run(base) != divide_simple(5, 2));
  CHECK(run(rev) == divide_simple(5, 2));
  CHECK(run(rev) == 2);

  const auto simple = synthesize(whole(snips, "divide_simple"), SynthConfig{}, ids);
  REQUIRE(simple.functions.size() == 2);
  CHECK(canonical_signature(simple.functions[0].signature) == "a:i32,i32;r:i32");
  CHECK(canonical_signature(rev.signature) == "a:i32,i32;r:i32");
}

TEST_CASE("synth: object returns expand over accessible members") {
  const char* src = R"(class Shape {
    public int length;
    int width;
    private int height;
    Shape(int length, int width, int height) { this.length = length; this.width = width; this.height = height; }
}
class Geo {
    static int build(int a, int b) {
        Shape s = new Shape(a, b, a + b);
        s.length = s.length * 2;
        return 0;
    }
}
)";
  const auto snips = snippets_of(src, LanguageId::java(), "Geo.java");
  IdRegistry ids;
  SynthConfig cfg;
  cfg.permute = false;
  const auto res = synthesize(pick(snips, "build", "Shape s", 2), cfg, ids);
  REQUIRE(res.functions.size() == 2);
  CHECK(res.functions[0].return_var == "s.length");
  CHECK(res.functions[1].return_var == "s.width");
  CHECK(res.functions[0].source_text.find("return s.length;") != std::string::npos);
  for (const auto& f : res.functions) CHECK(f.return_var.find("height") == std::string::npos);
}

TEST_CASE("synth: nested objects expand recursively") {
  const char* src = R"(class A { public int x; public int y; }
class B { public int p; public int q; public long r; private int hidden; }
class Outer {
    public A a;
    public B b;
    private int secret;
    Outer(int k) { }
}
class Use {
    static void mk(int k) {
        Outer o = new Outer(k);
        o.a = null;
    }
}
)";
  const auto file = parse(src, LanguageId::java(), "Use.java");
  // independent count: public non-static leaves reachable from Outer
  std::function<int(const std::string&)> leaves = [&](const std::string& t) -> int {
    const auto* c = file->find_class(t);
    if (!c) return 1;
    int n = 0;
    for (const auto& f : c->fields) {
      if (!f.is_static && f.visibility != Visibility::private_access) n += leaves(f.declared_type);
    }
    return n;
  };
  CHECK(leaves("Outer") == 5);
  const auto snips = segment::segment_file(file, 1);
  IdRegistry ids;
  SynthConfig cfg;
  cfg.permute = false;
  const auto res = synthesize(whole(snips, "mk"), cfg, ids);
  CHECK(res.functions.size() == 5);
  std::set<std::string> rets;
  for (const auto& f : res.functions) rets.insert(f.return_var);
  CHECK(rets == std::set<std::string>{"o.a.x", "o.a.y", "o.b.p", "o.b.q", "o.b.r"});
}

TEST_CASE("synth: object with no accessible members is dropped") {
  const char* src = R"(class P { private int v; P(int v) { this.v = v; } }
class Use {
    static void mk(int k) {
        P p = new P(k);
        k = k + 1;
    }
}
)";
  const auto snips = snippets_of(src, LanguageId::java(), "Use.java");
  IdRegistry ids;
  SynthConfig cfg;
  cfg.permute = false;
  const auto res = synthesize(whole(snips, "mk"), cfg, ids);
  REQUIRE(res.functions.size() == 1);
  CHECK(res.functions[0].return_var == "k");
}

TEST_CASE("synth: static members are qualified with the parent class") {
  const char* src = R"(package stolis;
import java.io.*;
import java.util.*;
public class MMT3 {
    static StringTokenizer in;
    public static void main(String[] args) throws Exception {
        BufferedReader br = new BufferedReader(new InputStreamReader(System.in));
        if (!in.hasMoreTokens())
            in = new StringTokenizer(br.readLine());
        int a = Integer.parseInt(in.nextToken());
        System.out.println(a);
    }
}
)";
  const auto snips = snippets_of(src, LanguageId::java(), "MMT3.java");
  IdRegistry ids;
  const auto res = synthesize(pick(snips, "main", "if (!in", 2), SynthConfig{}, ids);
  REQUIRE(res.functions.size() == 1);
  const auto& f = res.functions[0];
  CHECK(f.arg_names == std::vector<std::string>{"br"});
  CHECK(canonical_signature(f.signature) == "a:file;r:i32");
  CHECK(f.source_text.find("if (!MMT3.in.hasMoreTokens())") != std::string::npos);
  CHECK(f.source_text.find("MMT3.in = new StringTokenizer(br.readLine());") != std::string::npos);
  CHECK(f.source_text.find("Integer.parseInt(MMT3.in.nextToken())") != std::string::npos);
  CHECK(f.source_text.starts_with("package stolis;\nimport java.io.*;\nimport java.util.*;\n"));
  CHECK(f.entry == "stolis." + f.id + "." + f.id);
  CHECK(f.context_files == std::vector<std::string>{"MMT3.java"});
}

TEST_CASE("synth: java outer locals get a prologue declaration") {
  const char* src = R"(class M {
    static long func_3b0e(Long[] x2) {
        Long res = null;
        Long[] arr = x2;
        int len = arr.length;
        for (int i = 0; i < len; ++i) {
            long xx = arr[i];
            if (xx >= res)
                continue;
            res = xx;
        }
        return res;
    }
}
)";
  const auto snips = snippets_of(src, LanguageId::java(), "M.java");
  IdRegistry ids;
  SynthConfig cfg;
  const auto whole_res = synthesize(whole(snips, "func_3b0e"), cfg, ids);
  REQUIRE(whole_res.functions.size() == 1);
  CHECK(canonical_signature(whole_res.functions[0].signature) == "a:arr<i64>;r:i64");
  CHECK(whole_res.functions[0].return_var == "res");

  // the loop alone: res is read so it is an argument; arr and len too
  const auto loop = synthesize(pick(snips, "func_3b0e", "for (int i", 1), cfg, ids);
  REQUIRE_FALSE(loop.functions.empty());
  CHECK(loop.functions[0].arg_names == std::vector<std::string>{"len", "arr", "res"});

  // a snippet assigning an outer local without reading it
  const char* src2 = R"(class N {
    static int f(int a) {
        int r = 0;
        int t = a * 2;
        r = t + 1;
        return r;
    }
}
)";
  const auto snips2 = snippets_of(src2, LanguageId::java(), "N.java");
  const auto res2 = synthesize(pick(snips2, "f", "int t", 2), cfg, ids);
  REQUIRE(res2.functions.size() == 2);
  const auto it = std::find_if(res2.functions.begin(), res2.functions.end(),
                               [](const SynthesizedFunction& f) { return f.return_var == "r"; });
  REQUIRE(it != res2.functions.end());
  CHECK(it->source_text.find("        int r = 0;\n") != std::string::npos);
}

TEST_CASE("synth: ids are stable and collision-checked") {
  IdRegistry a, b;
  CHECK(a.assign("k1") == b.assign("k1"));
  CHECK(a.assign("k1") == a.assign("k1"));
  CHECK(a.assign("k1") != a.assign("k2"));
  CHECK(a.assign("k1").size() == 14);
}

TEST_CASE("synth: manifest round-trips") {
  const auto snips = snippets_of(kDivide, LanguageId::java(), "Div.java");
  IdRegistry ids;
  auto res = synthesize(whole(snips, "divide_complex"), SynthConfig{}, ids);
  const auto dir = std::filesystem::temp_directory_path() / "simclone_manifest_test";
  std::filesystem::remove_all(dir);
  write_work(dir, res.functions, NumericBounds{});
  const auto back = read_manifest(dir);
  REQUIRE(back.size() == res.functions.size());
  for (std::size_t k = 0; k < back.size(); ++k) {
    CHECK(back[k].id == res.functions[k].id);
    CHECK(back[k].signature == res.functions[k].signature);
    CHECK(back[k].permutation == res.functions[k].permutation);
    CHECK(back[k].source_path == "work/java/" + back[k].id + ".java");
    CHECK(std::filesystem::exists(dir / back[k].source_path));
  }
  std::filesystem::remove_all(dir);
}
