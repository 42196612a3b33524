#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "cluster/report.hpp"
#include "cluster/similarity.hpp"
#include "fixtures.hpp"
#include "model/error.hpp"

using namespace simclone;
using namespace simclone::cluster;

namespace {

Outcome ok(Value v) { return Outcome::ok(std::move(v)); }

std::vector<const IOProfile*> ptrs(const std::vector<IOProfile>& ps) {
  std::vector<const IOProfile*> out;
  for (const auto& p : ps) out.push_back(&p);
  return out;
}

}  // namespace

TEST_CASE("outputs_equal on the interleave strings and non-ok outcomes") {
  CHECK(outputs_equal(ok(Value::string("243")), ok(Value::string("243"))));
  CHECK_FALSE(outputs_equal(ok(Value::string("243")), ok(Value::string("24"))));
  CHECK(outputs_equal(ok(Value::integer(2)), ok(Value::real(2.0))));
  CHECK_FALSE(outputs_equal(Outcome::timeout({}), Outcome::timeout({})));
  CHECK_FALSE(outputs_equal(Outcome::exception("ValueError"), Outcome::exception("ValueError")));
  SimilarityConfig cfg;
  cfg.exception_match = true;
  CHECK(outputs_equal(Outcome::exception("ValueError: x"), Outcome::exception("ValueError: y"), cfg));
  CHECK_FALSE(outputs_equal(Outcome::exception("ValueError"), Outcome::exception("KeyError"), cfg));
  CHECK_FALSE(outputs_equal(Outcome::timeout({}), Outcome::timeout({}), cfg));
}

TEST_CASE("value equality rules") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(values_equal(Value::real(nan), Value::real(nan)));
  CHECK_FALSE(values_equal(Value::real(nan), Value::real(1.0)));
  CHECK(values_equal(Value::real(inf), Value::real(inf)));
  CHECK_FALSE(values_equal(Value::real(inf), Value::real(-inf)));
  CHECK(values_equal(Value::real(1e6), Value::real(1e6 + 0.5)));
  CHECK_FALSE(values_equal(Value::real(1e6), Value::real(1e6 + 2.0)));
  CHECK(values_equal(Value::real(0.0), Value::real(5e-10)));
  CHECK_FALSE(values_equal(Value::real(0.0), Value::real(5e-9)));
  CHECK(values_equal(Value::boolean(true), Value::integer(1)));
  CHECK_FALSE(values_equal(Value::boolean(false), Value::integer(1)));
  CHECK(values_equal(Value::character(U'x'), Value::string("x")));
  CHECK(values_equal(Value::character(U'é'), Value::string("\xc3\xa9")));
  CHECK_FALSE(values_equal(Value::character(U'x'), Value::string("xy")));
  CHECK(values_equal(Value::null(), Value::null()));
  CHECK_FALSE(values_equal(Value::null(), Value::integer(0)));
  CHECK_FALSE(values_equal(Value::string("1"), Value::integer(1)));
  CHECK(values_equal(fixtures::int_array({1, 2}), Value::array({Value::real(1.0), Value::integer(2)})));
  CHECK_FALSE(values_equal(fixtures::int_array({1, 2}), fixtures::int_array({1, 2, 3})));
  CHECK(values_equal(Value::object({{"w", Value::integer(1)}, {"h", Value::integer(2)}}),
                     Value::object({{"w", Value::integer(1)}, {"h", Value::real(2.0)}})));
  CHECK_FALSE(values_equal(Value::object({{"w", Value::integer(1)}, {"h", Value::integer(2)}}),
                           Value::object({{"h", Value::integer(2)}, {"w", Value::integer(1)}})));
  CHECK(values_equal(Value::file("r1"), Value::file("r1")));
}

TEST_CASE("widened integer equality agrees with exact equality") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 5000; ++i) {
    const auto a = static_cast<std::int64_t>(rng());
    const auto b = (rng() & 1) ? a : static_cast<std::int64_t>(rng() % 7) - 3 + a;
    CHECK(values_equal(Value::integer(a), Value::integer(b)) == (a == b));
    CHECK(values_equal(Value::integer(a), Value::integer(b)) == values_equal(Value::integer(b), Value::integer(a)));
  }
}

TEST_CASE("interleave walkthrough similarities and clustering") {
  const auto ps = fixtures::interleave_profiles();
  const auto& il = ps[0];
  const auto& fancy = ps[1];
  const auto& valid = ps[2];
  CHECK(*il.records[0].outcome.value == Value::string("243"));
  CHECK(*fancy.records[0].outcome.value == Value::string("24"));
  CHECK(*fancy.records[1].outcome.value == Value::string("2435"));
  CHECK(similarity(il, fancy) == 0.5);
  CHECK(similarity(il, valid) == 1.0);
  CHECK(similarity(fancy, valid) == 0.5);
  CHECK(similarity(fancy, il) == 0.5);
  auto clusters = find_clusters(ptrs(ps));
  REQUIRE(clusters.size() == 1);
  CHECK(clusters[0].members == std::vector<std::string>{"interleave", "valid_interleave"});
  CHECK(clusters[0].representative == "interleave");
  SimilarityConfig half;
  half.sim_t = 0.5;
  auto loose = find_clusters(ptrs(ps), half);
  REQUIRE(loose.size() == 1);
  CHECK(loose[0].members.size() == 3);
}

TEST_CASE("similarity rejects profiles from different pools") {
  auto ps = fixtures::interleave_profiles();
  ps[1].pool_key = "other";
  CHECK_THROWS_AS(similarity(ps[0], ps[1]), Error);
  try {
    similarity(ps[0], ps[1]);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::pool_mismatch);
  }
  auto clusters = find_clusters(ptrs(ps));
  REQUIRE(clusters.size() == 1);
  CHECK(clusters[0].members.size() == 2);
}

TEST_CASE("comparability") {
  auto sig = [](const char* s) { return parse_canonical_signature(s); };
  CHECK_FALSE(comparable(sig("a:i32,s;r:i32"), sig("a:i64,file;r:i32")));
  CHECK(comparable(sig("a:i32,s;r:i32"), sig("a:i64,s;r:i64")));
  CHECK_FALSE(comparable(sig("a:i32,s;r:i32"), sig("a:s;r:i32")));
  CHECK(comparable(sig("a:arr<i64>;r:i64"), sig("a:arr<i64>;r:i64")));
  CHECK(comparable(sig("a:i64;r:i64"), sig("a:i64;r:f64")));
  CHECK_FALSE(comparable(sig("a:i64;r:i64"), sig("a:i64;r:arr<i64>")));
}

TEST_CASE("loop sum and library sum land in one cluster") {
  auto pool = std::make_shared<inputs::InputPool>();
  pool->key = "a:arr<i64>;r:any";
  std::mt19937_64 rng(4);
  for (int i = 0; i < 64; ++i) {
    std::vector<std::int64_t> xs(rng() % 9);
    for (auto& x : xs) x = static_cast<std::int64_t>(rng() % 2001) - 1000;
    pool->tuples.push_back({fixtures::int_array(xs)});
  }
  auto loop_sum = [](const Tuple& t) {
    std::int64_t s = 0;
    for (const auto& v : t[0].as<Value::Array>()) s += v.as<std::int64_t>();
    return Outcome::ok(Value::integer(s));
  };
  auto lib_sum = [](const Tuple& t) {
    const auto xs = fixtures::ints_of(t[0]);
    return Outcome::ok(Value::integer(std::accumulate(xs.begin(), xs.end(), std::int64_t{0})));
  };
  auto max_fn = [](const Tuple& t) {
    const auto xs = fixtures::ints_of(t[0]);
    if (xs.empty()) return Outcome::exception("ValueError");
    return Outcome::ok(Value::integer(*std::max_element(xs.begin(), xs.end())));
  };
  std::vector<IOProfile> ps = {fixtures::replay_profile("func_db8e", "a:arr<i64>;r:i64", pool, loop_sum),
                               fixtures::replay_profile("max", "a:arr<i64>;r:i64", pool, max_fn),
                               fixtures::replay_profile("func_43df", "a:arr<i64>;r:i64", pool, lib_sum)};
  auto clusters = find_clusters(ptrs(ps));
  REQUIRE(clusters.size() == 1);
  CHECK(clusters[0].members == std::vector<std::string>{"func_db8e", "func_43df"});
}

TEST_CASE("clustering invariants over random profiles") {
  for (double sim_t : {1.0, 0.9, 0.75}) {
    auto rp = fixtures::random_profiles(400, 24, 77 + static_cast<std::uint64_t>(sim_t * 100), 0.3);
    SimilarityConfig cfg;
    cfg.sim_t = sim_t;
    auto clusters = find_clusters(ptrs(rp.profiles), cfg);
    std::map<std::string, const IOProfile*> by_id;
    for (const auto& p : rp.profiles) by_id[p.function_id] = &p;
    std::set<std::string> seen;
    for (const auto& c : clusters) {
      CHECK(c.members.size() >= 2);
      CHECK(c.members.front() == c.representative);
      for (const auto& m : c.members) {
        CHECK(seen.insert(m).second);
        CHECK(similarity(*by_id[c.representative], *by_id[m], cfg) >= sim_t);
      }
    }
  }
}

TEST_CASE("exact clustering equals output equivalence classes under any order") {
  auto rp = fixtures::random_profiles(300, 16, 5, 0.4);
  // independent oracle: group all-ok profiles by pool, return family and output vector
  std::map<std::string, std::set<std::string>> classes;
  for (const auto& p : rp.profiles) {
    std::ostringstream key;
    key << p.pool_key << "|" << (p.signature.ret.kind() == Kind::string ? "s" : "n");
    bool all_ok = true;
    for (const auto& r : p.records) {
      if (r.outcome.status != Status::ok) all_ok = false;
      else key << "|" << r.outcome.value->as<std::int64_t>();
    }
    if (all_ok) classes[key.str()].insert(p.function_id);
  }
  std::set<std::set<std::string>> expected;
  for (const auto& [k, members] : classes) {
    if (members.size() >= 2) expected.insert(members);
  }
  REQUIRE(!expected.empty());
  std::mt19937_64 rng(99);
  auto order = ptrs(rp.profiles);
  for (int round = 0; round < 20; ++round) {
    std::shuffle(order.begin(), order.end(), rng);
    CHECK(fixtures::as_sets(find_clusters(order)) == expected);
  }
}

TEST_CASE("no reported clusters when every output differs") {
  auto pool = std::make_shared<inputs::InputPool>();
  pool->key = "a:i64;r:any";
  for (int i = 0; i < 8; ++i) pool->tuples.push_back({Value::integer(i)});
  std::vector<IOProfile> ps;
  for (int k = 0; k < 5; ++k) {
    ps.push_back(fixtures::replay_profile("g" + std::to_string(k), "a:i64;r:i64", pool, [k](const Tuple& t) {
      return Outcome::ok(Value::integer(t[0].as<std::int64_t>() * 10 + k));
    }));
  }
  CHECK(find_clusters(ptrs(ps)).empty());
  CHECK(partition(ptrs(ps)).size() == 5);
}

TEST_CASE("report records collapse same-origin members") {
  MemberTable table = {
      {"a", {"a", "java", "A.java:3-9", false}},
      {"a_p1", {"a_p1", "java", "A.java:3-9", false}},
      {"b", {"b", "python", "b.py:1-4", true}},
      {"c", {"c", "python", "c.py:2-5", false}},
      {"c_p1", {"c_p1", "python", "c.py:2-5", false}},
  };
  std::vector<CloneCluster> raw(3);
  raw[0].members = {"a", "a_p1", "b"};
  raw[0].representative = "a";
  raw[1].members = {"c", "c_p1"};
  raw[1].representative = "c";
  raw[2].members = {"c", "b"};
  raw[2].representative = "c";
  auto recs = build_records(raw, table, "io");
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].id == "c0001");
  CHECK(recs[0].members.size() == 2);
  CHECK(recs[0].cross_language());
  CHECK(recs[1].id == "c0002");
  CHECK_FALSE(recs[1].cross_language());

  auto dir = std::filesystem::temp_directory_path() / "simclone_test_report";
  std::filesystem::remove_all(dir);
  ValidationSummary s;
  s.clusters = 2;
  s.valid = 1;
  s.false_positives = 1;
  s.clones = 4;
  s.precision = 0.5;
  write_records(dir / "clusters.jsonl", recs, s);
  auto [back, summary] = read_records(dir / "clusters.jsonl");
  REQUIRE(back.size() == 2);
  CHECK(back[0].members[1].whole_method);
  CHECK(back[1].representative == "c");
  REQUIRE(summary);
  CHECK(summary->precision == 0.5);
  CHECK_THROWS_AS(read_records(dir / "absent.jsonl"), Error);

  std::swap(recs[0], recs[1]);
  const auto digest = render_digest(recs, nlohmann::json{{"snippets", 4}});
  CHECK(digest.find("cross-language") < digest.find("single-language"));
  CHECK(digest.find("c0001") < digest.find("c0002"));
}

TEST_CASE("pairs sharing a function are grouped into one cluster") {
  std::istringstream in("# pairs\nA,B\nC D\n[\"B\",\"E\"]\n{\"a\":\"F\",\"b\":\"G\"}\n\nD,C\n");
  auto pairs = parse_pairs(in);
  REQUIRE(pairs.size() == 5);
  auto groups = group_pairs(pairs);
  REQUIRE(groups.size() == 3);
  CHECK(groups[0].members == std::vector<std::string>{"A", "B", "E"});
  CHECK(groups[1].members == std::vector<std::string>{"C", "D"});
  CHECK(groups[2].members == std::vector<std::string>{"F", "G"});
  std::istringstream bad("A,B,C\n");
  CHECK_THROWS_AS(parse_pairs(bad), Error);
}

TEST_CASE("pair grouping matches a naive transitive closure") {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 50; ++round) {
    std::vector<std::pair<std::string, std::string>> pairs;
    const int n = 2 + static_cast<int>(rng() % 12);
    for (int k = 0; k < n; ++k) {
      pairs.emplace_back("f" + std::to_string(rng() % 15), "f" + std::to_string(rng() % 15));
    }
    // closure by repeated merging
    std::vector<std::set<std::string>> sets;
    for (const auto& [a, b] : pairs) sets.push_back({a, b});
    for (bool merged = true; merged;) {
      merged = false;
      for (std::size_t i = 0; i < sets.size() && !merged; ++i) {
        for (std::size_t j = i + 1; j < sets.size() && !merged; ++j) {
          std::vector<std::string> common;
          std::set_intersection(sets[i].begin(), sets[i].end(), sets[j].begin(), sets[j].end(),
                                std::back_inserter(common));
          if (!common.empty()) {
            sets[i].insert(sets[j].begin(), sets[j].end());
            sets.erase(sets.begin() + static_cast<long>(j));
            merged = true;
          }
        }
      }
    }
    std::set<std::set<std::string>> expected;
    for (const auto& s : sets) {
      if (s.size() >= 2) expected.insert(s);
    }
    CHECK(fixtures::as_sets(group_pairs(pairs)) == expected);
  }
}
