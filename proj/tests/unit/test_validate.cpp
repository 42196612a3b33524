#include "doctest.h"

#include <map>
#include <random>

#include "cluster/report.hpp"
#include "exec/engine.hpp"
#include "exec/process_adapter.hpp"
#include "fixtures.hpp"
#include "lang/ast.hpp"
#include "model/error.hpp"
#include "segment/segmenter.hpp"
#include "validate/ast_baseline.hpp"
#include "validate/consistency.hpp"
#include "validate/validator.hpp"

using namespace simclone;
using namespace simclone::validate;

namespace {

using Forest = std::vector<NormTree>;

std::string key_of(const Forest& f) {
  std::string s;
  for (const auto& t : f) {
    s += "(" + t.label + key_of(t.children) + ")";
  }
  return s;
}

std::size_t forest_size(const Forest& f) {
  std::size_t n = 0;
  for (const auto& t : f) n += t.size();
  return n;
}

// Recursive forest edit distance on rightmost roots, memoized.
std::size_t oracle_distance(const Forest& f, const Forest& g, std::map<std::string, std::size_t>& memo) {
  if (f.empty()) return forest_size(g);
  if (g.empty()) return forest_size(f);
  const std::string key = key_of(f) + "|" + key_of(g);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  const NormTree& v = f.back();
  const NormTree& w = g.back();
  Forest f_del(f.begin(), f.end() - 1);
  f_del.insert(f_del.end(), v.children.begin(), v.children.end());
  Forest g_del(g.begin(), g.end() - 1);
  g_del.insert(g_del.end(), w.children.begin(), w.children.end());
  const Forest f_rest(f.begin(), f.end() - 1);
  const Forest g_rest(g.begin(), g.end() - 1);
  const std::size_t d = std::min({oracle_distance(f_del, g, memo) + 1, oracle_distance(f, g_del, memo) + 1,
                                  oracle_distance(v.children, w.children, memo) +
                                      oracle_distance(f_rest, g_rest, memo) + (v.label == w.label ? 0 : 1)});
  memo[key] = d;
  return d;
}

NormTree random_tree(std::mt19937_64& rng, int budget) {
  NormTree t{std::string(1, static_cast<char>('a' + rng() % 3)), {}};
  int left = budget - 1;
  while (left > 0 && rng() % 3 != 0) {
    const int take = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(left));
    t.children.push_back(random_tree(rng, take));
    left -= take;
  }
  return t;
}

NormTree tree(const std::string& label, std::vector<NormTree> kids = {}) { return {label, std::move(kids)}; }

std::shared_ptr<const lang::ParsedFile> parse_py(const std::string& text, const std::string& path = "t.py") {
  return std::make_shared<const lang::ParsedFile>(lang::parse_source(text, LanguageId::python(), path));
}

NormTree body_tree(const std::shared_ptr<const lang::ParsedFile>& f, std::size_t fn = 0) {
  return normalize(std::span<const lang::Statement>(f->functions.at(fn).body));
}

}  // namespace

TEST_CASE("tree edit distance on a textbook pair") {
  // f(d(a c(b)) e) vs f(c(d(a b)) e)
  const auto t1 = tree("f", {tree("d", {tree("a"), tree("c", {tree("b")})}), tree("e")});
  const auto t2 = tree("f", {tree("c", {tree("d", {tree("a"), tree("b")})}), tree("e")});
  CHECK(tree_edit_distance(t1, t2) == 2);
  CHECK(tree_edit_distance(t1, t1) == 0);
  CHECK(tree_edit_distance(tree("a"), tree("b")) == 1);
  CHECK(tree_edit_distance(tree("a", {tree("b")}), tree("a")) == 1);
}

TEST_CASE("tree edit distance matches the recursive forest oracle") {
  std::mt19937_64 rng(21);
  for (int round = 0; round < 300; ++round) {
    const auto a = random_tree(rng, 1 + static_cast<int>(rng() % 7));
    const auto b = random_tree(rng, 1 + static_cast<int>(rng() % 7));
    std::map<std::string, std::size_t> memo;
    const auto expected = oracle_distance({a}, {b}, memo);
    CHECK(tree_edit_distance(a, b) == expected);
    CHECK(tree_edit_distance(b, a) == expected);
  }
}

TEST_CASE("renamed twins cluster and two-node differences do not") {
  auto f = parse_py(
      "def one(xs):\n"
      "    total = 0\n"
      "    for x in xs:\n"
      "        total += x\n"
      "    return total\n"
      "def two(items):\n"
      "    acc = 10\n"
      "    for it in items:\n"
      "        acc += it\n"
      "    return acc\n"
      "def three(items):\n"
      "    acc = 10\n"
      "    for it in items:\n"
      "        acc -= it\n"
      "    return acc\n"
      "def four(items):\n"
      "    acc = 10\n"
      "    for it in items:\n"
      "        acc += it * 2\n"
      "    return acc\n");
  const auto t1 = body_tree(f, 0);
  const auto t2 = body_tree(f, 1);
  const auto t3 = body_tree(f, 2);
  const auto t4 = body_tree(f, 3);
  CHECK(tree_edit_distance(t1, t2) == 0);
  CHECK(tree_edit_distance(t1, t3) == 1);
  CHECK(tree_edit_distance(t1, t4) == 2);
  auto clusters = ast_type3_clones({{"one", t1}, {"four", t4}, {"two", t2}, {"three", t3}});
  REQUIRE(clusters.size() == 1);
  CHECK(clusters[0].members == std::vector<std::string>{"one", "two", "three"});
}

TEST_CASE("loop sum and library sum are not AST clones") {
  auto f = parse_py(
      "def func_db8e(a):\n"
      "    n = len(a)\n"
      "    sum0 = [0] * (n + 1)\n"
      "    for i in xrange(n):\n"
      "        sum0[i + 1] = sum0[i] + a[i]\n"
      "    allv = sum0[-1]\n"
      "    return allv\n"
      "def func_43df(items):\n"
      "    _sum = sum(items)\n"
      "    j = len(items) - 1\n"
      "    return _sum\n");
  CHECK(tree_edit_distance(body_tree(f, 0), body_tree(f, 1)) > 1);
  CHECK(ast_type3_clones({{"a", body_tree(f, 0)}, {"b", body_tree(f, 1)}}).empty());
}

TEST_CASE("consistency screen rules") {
  auto pool = std::make_shared<inputs::InputPool>();
  pool->key = "a:i64;r:any";
  pool->tuples = {{Value::integer(1)}, {Value::integer(2)}};
  auto prof = [&](const std::string& id, std::function<Value(std::int64_t)> f) {
    return fixtures::replay_profile(id, "a:i64;r:any", pool,
                                    [f](const Tuple& t) { return Outcome::ok(f(t[0].as<std::int64_t>())); });
  };
  const auto a = prof("A", [](std::int64_t x) { return Value::integer(x); });
  const auto b = prof("B", [](std::int64_t x) { return Value::integer(9 * x); });
  CHECK(output_consistency(a, b));
  CHECK(output_consistency(b, a));
  CHECK(output_consistency(a, a));
  auto b2 = b;
  b2.records[1].outcome = Outcome::ok(Value::integer(19));
  CHECK_FALSE(output_consistency(a, b2));

  const auto sq = prof("sq", [](std::int64_t x) { return Value::integer(x * x); });
  const auto sq1 = prof("sq1", [](std::int64_t x) { return Value::integer(x * x + 1); });
  const auto sq2 = prof("sq2", [](std::int64_t x) { return Value::integer(2 * x * x); });
  CHECK(output_consistency(sq, sq1));  // offsets {1,1}
  CHECK(output_consistency(sq, sq2));  // ratios {2,2}

  const auto zero = prof("z", [](std::int64_t x) { return Value::integer(x - 1); });
  const auto zero3 = prof("z3", [](std::int64_t x) { return Value::integer(x == 1 ? 3 : 5); });
  CHECK_FALSE(output_consistency(zero, zero3));  // 0->3 mixes zero and nonzero
  CHECK(output_consistency(zero, zero));

  const auto s1 = prof("s1", [](std::int64_t x) { return Value::string(std::string(static_cast<std::size_t>(x), 'a')); });
  const auto s2 = prof("s2", [](std::int64_t x) { return Value::string(std::string(static_cast<std::size_t>(x), 'a') + "!!"); });
  const auto s3 = prof("s3", [](std::int64_t x) { return Value::string(std::string(static_cast<std::size_t>(x * 3), 'b')); });
  CHECK(output_consistency(s1, s2));
  CHECK_FALSE(output_consistency(s1, s3));

  const auto arr1 = prof("v1", [](std::int64_t x) { return fixtures::int_array({x, 2 * x}); });
  const auto arr2 = prof("v2", [](std::int64_t x) { return fixtures::int_array({x + 4, 6 * x}); });
  const auto arr3 = prof("v3", [](std::int64_t x) { return fixtures::int_array({x + 4, 6 * x, 0}); });
  CHECK(output_consistency(arr1, arr2));
  CHECK_FALSE(output_consistency(arr1, arr3));

  auto failing = a;
  failing.records[0].outcome = Outcome::exception("ValueError");
  CHECK_THROWS_AS(output_consistency(failing, b), Error);
}

TEST_CASE("levenshtein distances") {
  CHECK(levenshtein("kitten", "sitting") == 3);
  CHECK(levenshtein("", "abc") == 3);
  CHECK(levenshtein("abc", "abc") == 0);
  CHECK(levenshtein("flaw", "lawn") == 2);
}

namespace {

struct Fixture {
  std::shared_ptr<inputs::InputPool> fresh;
  std::map<std::string, std::function<Outcome(const Tuple&)>> fns;

  Reexecute rerun() {
    return [this](const std::string& id) -> std::optional<IOProfile> {
      auto it = fns.find(id);
      if (it == fns.end()) return std::nullopt;
      return fixtures::replay_profile(id, "a:i64;r:i64", fresh, it->second);
    };
  }
};

cluster::ClusterRecord record(const std::string& id, std::vector<std::string> members) {
  cluster::ClusterRecord r;
  r.id = id;
  r.method = "io";
  r.representative = members.front();
  for (auto& m : members) r.members.push_back({m, "python", m + ".py:0-1", false});
  return r;
}

}  // namespace

TEST_CASE("validation flags planted nondeterminism and keeps pure clusters") {
  Fixture fx;
  fx.fresh = std::make_shared<inputs::InputPool>();
  fx.fresh->key = "a:i64;r:any";
  for (int i = -30; i < 30; ++i) fx.fresh->tuples.push_back({Value::integer(i * 7)});
  auto twice = [](const Tuple& t) { return Outcome::ok(Value::integer(2 * t[0].as<std::int64_t>())); };
  auto sum_self = [](const Tuple& t) { return Outcome::ok(Value::integer(t[0].as<std::int64_t>() + t[0].as<std::int64_t>())); };
  auto random_fn = [](const Tuple&) {
    static std::mt19937_64 nondet(std::random_device{}());
    return Outcome::ok(Value::integer(static_cast<std::int64_t>(nondet() % 1000)));
  };
  auto abs_fn = [](const Tuple& t) { return Outcome::ok(Value::integer(std::llabs(t[0].as<std::int64_t>()))); };
  auto ident = [](const Tuple& t) { return Outcome::ok(t[0]); };
  fx.fns = {{"twice", twice}, {"sum_self", sum_self}, {"rand", random_fn}, {"abs", abs_fn}, {"ident", ident}};
  // "abs" and "ident" agreed on a non-negative detection pool
  std::vector<cluster::ClusterRecord> recs = {record("c0001", {"twice", "sum_self"}), record("c0002", {"twice", "rand"}),
                                              record("c0003", {"ident", "abs"}), record("c0004", {"ident", "gone"})};
  auto first = validate_clusters(recs, fx.rerun(), {});
  CHECK(recs[0].validity == Validity::valid);
  CHECK(recs[1].validity == Validity::false_positive);
  CHECK(recs[2].validity == Validity::false_positive);
  CHECK(recs[3].validity == Validity::false_positive);
  CHECK(first.summary.clusters == 4);
  CHECK(first.summary.valid == 1);
  CHECK(first.summary.false_positives == 3);
  CHECK(first.summary.precision == doctest::Approx(0.25));
  CHECK(first.verdicts[2].regrouped.size() == 2);

  auto again = validate_clusters(recs, fx.rerun(), {}, 3);
  for (std::size_t k = 0; k < recs.size(); ++k) CHECK(first.verdicts[k].validity == again.verdicts[k].validity);
}

TEST_CASE("validation of a worker returning random values") {
  auto pool = std::make_shared<inputs::InputPool>();
  pool->key = "a:i64;r:any";
  for (int i = 0; i < 16; ++i) pool->tuples.push_back({Value::integer(i)});
  auto run = [&](const std::string& behaviour) {
    exec::FunctionJob job;
    job.id = behaviour;
    job.signature = parse_canonical_signature("a:i64;r:i64");
    job.load = {"/dev/null", behaviour, "a:i64;r:i64"};
    job.factory = [] {
      return std::make_unique<exec::ProcessAdapter>(
          exec::WorkerCommand{SIMCLONE_FAKE_WORKER, {}, {}, std::chrono::milliseconds(10000)});
    };
    job.pool = pool;
    return exec::execute_profile(job, exec::ExecConfig{}).profile;
  };
  std::vector<cluster::ClusterRecord> recs = {record("c0001", {"identity", "random"})};
  auto report = validate_clusters(recs, run, {});
  CHECK(recs[0].validity == Validity::false_positive);
  CHECK(report.summary.precision == 0.0);
}

TEST_CASE("precision is valid clusters over reported clusters") {
  std::vector<cluster::ClusterRecord> recs;
  for (int i = 0; i < 13; ++i) {
    auto r = record("c" + std::to_string(i), {"x" + std::to_string(i), "y" + std::to_string(i)});
    r.validity = i < 4 ? Validity::valid : Validity::false_positive;
    recs.push_back(r);
  }
  const auto s = summarize(recs);
  CHECK(s.false_positives == 9);
  CHECK(s.clones == 26);
  CHECK(std::fabs(100.0 * s.precision - 30.7) < 0.1);
  CHECK(summarize({}).precision == 0.0);
  CHECK(cluster::summary_row(s).find("30.8%") != std::string::npos);
}
