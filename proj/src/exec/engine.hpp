#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "exec/adapter.hpp"
#include "inputs/pool.hpp"
#include "model/value.hpp"

namespace simclone::exec {

struct ExecConfig {
  std::chrono::milliseconds timeout{5000};
  int workers = 1;
};

struct FunctionJob {
  std::string id;
  Signature signature;
  LoadSpec load;
  AdapterFactory factory;
  std::shared_ptr<const inputs::InputPool> pool;
};

struct ExecStats {
  std::size_t loaded = 0;
  std::size_t load_errors = 0;
  std::size_t timeouts = 0;
  std::size_t crashes = 0;
};

struct JobResult {
  std::optional<IOProfile> profile;  // empty when the function never loaded
  std::string error;
  ExecStats stats;
};

// Runs one function over every tuple of its pool, in pool order. A timeout
// kills the worker and the next tuple runs on a fresh one; after a crash the
// remaining tuples are retried once on a fresh worker, then reported as
// exception("adapter-crash").
JobResult execute_profile(const FunctionJob& job, const ExecConfig& cfg);

// Runs every job on `cfg.workers` threads; results are index-aligned with jobs.
std::vector<JobResult> execute_all(const std::vector<FunctionJob>& jobs, const ExecConfig& cfg,
                                   const std::function<void(std::size_t done)>& progress = {});

nlohmann::json profile_to_json(const IOProfile& p);
IOProfile profile_from_json(const nlohmann::json& j, const inputs::InputPool& pool);
void write_profile(const std::filesystem::path& dir, const IOProfile& p);
std::optional<IOProfile> read_profile(const std::filesystem::path& dir, const std::string& id,
                                      const inputs::InputPool& pool);

}  // namespace simclone::exec
