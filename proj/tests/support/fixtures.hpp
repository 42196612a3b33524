#pragma once

// Profile fixtures shared by the unit tests and the acceptance runner.

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "exec/adapter.hpp"
#include "exec/engine.hpp"
#include "inputs/pool.hpp"
#include "model/types.hpp"
#include "model/value.hpp"

namespace simclone::fixtures {

inline Value int_array(const std::vector<std::int64_t>& xs) {
  Value::Array a;
  for (auto x : xs) a.push_back(Value::integer(x));
  return Value::array(std::move(a));
}

inline std::vector<std::int64_t> ints_of(const Value& v) {
  std::vector<std::int64_t> out;
  for (const auto& e : v.as<Value::Array>()) out.push_back(e.as<std::int64_t>());
  return out;
}

// Java-style interleave: pairs first, then the tail of the longer array.
inline std::string interleave(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
  std::string result;
  std::size_t i = 0;
  for (; i < a.size() && i < b.size(); ++i) result += std::to_string(a[i]) + std::to_string(b[i]);
  const auto& rest = a.size() < b.size() ? b : a;
  for (std::size_t j = i; j < rest.size(); ++j) result += std::to_string(rest[j]);
  return result;
}

// zip-based: stops at the shorter list.
inline std::string fancy_interleave(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
  std::string result;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) result += std::to_string(a[i]) + std::to_string(b[i]);
  return result;
}

// Index walk up to the longer length.
inline std::string valid_interleave(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
  std::string result;
  for (std::size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
    if (i < a.size()) result += std::to_string(a[i]);
    if (i < b.size()) result += std::to_string(b[i]);
  }
  return result;
}

inline std::shared_ptr<inputs::InputPool> interleave_pool() {
  auto pool = std::make_shared<inputs::InputPool>();
  pool->key = "a:arr<i32>,arr<i32>;r:any";
  pool->tuples = {{int_array({2, 3}), int_array({4})}, {int_array({2, 3}), int_array({4, 5})}};
  return pool;
}

// Tabulates `fn` over the pool and runs it back through a replay adapter.
inline IOProfile replay_profile(const std::string& id, const std::string& sig,
                                std::shared_ptr<const inputs::InputPool> pool,
                                const std::function<Outcome(const Tuple&)>& fn) {
  exec::ReplayAdapter::Table table;
  for (const auto& t : pool->tuples) table.emplace_back(t, fn(t));
  auto index = exec::ReplayAdapter::index(table);
  exec::FunctionJob job;
  job.id = id;
  job.signature = parse_canonical_signature(sig);
  job.load = {id, id, sig};
  job.factory = [index] { return std::make_unique<exec::ReplayAdapter>(index); };
  job.pool = std::move(pool);
  return *exec::execute_profile(job, exec::ExecConfig{}).profile;
}

inline std::vector<IOProfile> interleave_profiles() {
  auto pool = interleave_pool();
  const std::string sig = "a:arr<i32>,arr<i32>;r:s";
  auto wrap = [](std::string (*f)(const std::vector<std::int64_t>&, const std::vector<std::int64_t>&)) {
    return [f](const Tuple& t) { return Outcome::ok(Value::string(f(ints_of(t[0]), ints_of(t[1])))); };
  };
  return {replay_profile("interleave", sig, pool, wrap(interleave)),
          replay_profile("fancy_interleave", sig, pool, wrap(fancy_interleave)),
          replay_profile("valid_interleave", sig, pool, wrap(valid_interleave))};
}

// Random profiles built from a few behaviours per pool. Profiles drawn from
// one behaviour are identical; `noise` is the chance that a profile flips
// individual outputs, giving near-collisions.
struct RandomProfiles {
  std::vector<IOProfile> profiles;
  std::map<std::string, int> behaviour;  // function id -> behaviour index (before noise)
};

inline RandomProfiles random_profiles(std::size_t count, std::size_t records, std::uint64_t seed, double noise,
                                      int behaviours = 12, int pools = 3) {
  std::mt19937_64 rng(seed);
  auto below = [&](std::uint64_t n) { return static_cast<std::int64_t>(rng() % n); };
  std::vector<std::vector<std::vector<Outcome>>> tables(pools);
  const std::vector<std::string> rets = {"i64", "f64", "s"};
  for (int p = 0; p < pools; ++p) {
    for (int b = 0; b < behaviours; ++b) {
      std::vector<Outcome> outs;
      for (std::size_t r = 0; r < records; ++r) {
        const auto roll = b % 4 == 3 ? below(20) : 2;
        if (roll == 0) {
          outs.push_back(Outcome::exception("ValueError"));
        } else if (roll == 1) {
          outs.push_back(Outcome::timeout({}));
        } else {
          outs.push_back(Outcome::ok(Value::integer(below(4))));
        }
      }
      tables[p].push_back(std::move(outs));
    }
  }
  RandomProfiles out;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t k = 0; k < count; ++k) {
    IOProfile prof;
    const int p = static_cast<int>(below(pools));
    const int b = static_cast<int>(below(behaviours));
    prof.function_id = "f" + std::to_string(k);
    prof.pool_key = "pool" + std::to_string(p);
    prof.signature = parse_canonical_signature("a:i64;r:" + rets[static_cast<std::size_t>(below(3))]);
    const bool noisy = unit(rng) < noise;
    for (std::size_t r = 0; r < records; ++r) {
      Outcome o = tables[p][b][r];
      if (noisy && below(static_cast<std::uint64_t>(records)) == 0) o = Outcome::ok(Value::integer(100 + below(3)));
      prof.records.push_back({{Value::integer(static_cast<std::int64_t>(r))}, std::move(o)});
    }
    out.behaviour[prof.function_id] = b;
    out.profiles.push_back(std::move(prof));
  }
  return out;
}

inline std::set<std::set<std::string>> as_sets(const std::vector<CloneCluster>& clusters) {
  std::set<std::set<std::string>> out;
  for (const auto& c : clusters) out.emplace(c.members.begin(), c.members.end());
  return out;
}

}  // namespace simclone::fixtures
