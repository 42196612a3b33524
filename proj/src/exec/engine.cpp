#include "exec/engine.hpp"

#include <atomic>
#include <fstream>
#include <thread>

namespace simclone::exec {

using nlohmann::json;

JobResult execute_profile(const FunctionJob& job, const ExecConfig& cfg) {
  JobResult res;
  IOProfile profile;
  profile.function_id = job.id;
  profile.signature = job.signature;
  profile.pool_key = job.pool->key;
  std::unique_ptr<Adapter> adapter;
  auto fresh = [&] {
    if (adapter) adapter->shutdown();
    adapter = job.factory();
    adapter->load(job.load);
  };
  try {
    fresh();
  } catch (const Error& e) {
    res.error = e.what();
    ++res.stats.load_errors;
    return res;
  }
  ++res.stats.loaded;
  bool retried = false;
  const auto& tuples = job.pool->tuples;
  profile.records.reserve(tuples.size());
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    try {
      if (!adapter || adapter->state() != AdapterState::loaded) fresh();
      Outcome out = adapter->invoke(tuples[i], cfg.timeout);
      if (out.status == Status::timeout) ++res.stats.timeouts;
      profile.records.push_back({tuples[i], std::move(out)});
    } catch (const Error& e) {
      ++res.stats.crashes;
      if (!retried) {
        retried = true;
        --i;
        adapter.reset();
        continue;
      }
      for (; i < tuples.size(); ++i) profile.records.push_back({tuples[i], Outcome::exception("adapter-crash")});
      break;
    }
  }
  if (adapter) adapter->shutdown();
  res.profile = std::move(profile);
  return res;
}

std::vector<JobResult> execute_all(const std::vector<FunctionJob>& jobs, const ExecConfig& cfg,
                                   const std::function<void(std::size_t)>& progress) {
  std::vector<JobResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mu;
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= jobs.size()) return;
      results[k] = execute_profile(jobs[k], cfg);
      const std::size_t d = ++done;
      if (progress) {
        std::lock_guard lock(progress_mu);
        progress(d);
      }
    }
  };
  const int n = std::max(1, std::min<int>(cfg.workers, static_cast<int>(jobs.size())));
  std::vector<std::thread> threads;
  for (int t = 1; t < n; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  return results;
}

json profile_to_json(const IOProfile& p) {
  json records = json::array();
  for (const auto& r : p.records) records.push_back(outcome_to_json(r.outcome));
  return {{"function_id", p.function_id},
          {"signature", canonical_signature(p.signature)},
          {"pool_key", p.pool_key},
          {"outcomes", std::move(records)}};
}

IOProfile profile_from_json(const json& j, const inputs::InputPool& pool) {
  IOProfile p;
  p.function_id = j.at("function_id").get<std::string>();
  p.signature = parse_canonical_signature(j.at("signature").get<std::string>());
  p.pool_key = j.at("pool_key").get<std::string>();
  const auto& outs = j.at("outcomes");
  if (outs.size() != pool.tuples.size()) {
    throw Error(ErrorCode::load, "profile " + p.function_id + " does not align with its pool");
  }
  for (std::size_t i = 0; i < outs.size(); ++i) p.records.push_back({pool.tuples[i], outcome_from_json(outs[i])});
  return p;
}

void write_profile(const std::filesystem::path& dir, const IOProfile& p) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  std::ofstream out(dir / (p.function_id + ".json"), std::ios::binary | std::ios::trunc);
  out << profile_to_json(p).dump() << "\n";
  if (!out) throw Error(ErrorCode::io, "cannot write profile " + p.function_id);
}

std::optional<IOProfile> read_profile(const std::filesystem::path& dir, const std::string& id,
                                      const inputs::InputPool& pool) {
  std::ifstream in(dir / (id + ".json"), std::ios::binary);
  if (!in) return std::nullopt;
  try {
    return profile_from_json(json::parse(in), pool);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::load, "corrupt profile " + id + ": " + e.what());
  }
}

}  // namespace simclone::exec
