#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cluster/report.hpp"
#include "exec/adapter.hpp"
#include "pipeline/config.hpp"
#include "synth/synthesizer.hpp"
#include "validate/validator.hpp"

namespace simclone::pipeline {

struct Hooks {
  // Supplies adapters instead of worker processes (replay runs, tests).
  std::function<exec::AdapterFactory(const synth::SynthesizedFunction&)> adapters;
  std::function<void(const std::string&)> progress;
};

struct DetectResult {
  std::filesystem::path run_dir;
  nlohmann::json stats;
  std::vector<cluster::ClusterRecord> records;
};

// segmentation -> synthesis -> inputs -> execution -> clustering, leaving
// work/, pools/, profiles/ and report/ under cfg.out.
DetectResult detect(const RunConfig& cfg, const Hooks& hooks = {});

struct ValidateOptions {
  std::optional<std::uint64_t> seed;  // defaults to the detection seed
  std::optional<int> workers;
  std::map<std::string, std::string> shims;  // overrides the recorded commands
};

struct ValidateResult {
  validate::ValidationReport report;
  std::vector<cluster::ClusterRecord> records;
};

// Re-runs every cluster member on fresh fuzzed pools and rewrites
// report/clusters.jsonl with verdicts and a summary record.
ValidateResult validate_run(const std::filesystem::path& run_dir, const ValidateOptions& opts = {},
                            const Hooks& hooks = {});

struct BaselineResult {
  std::filesystem::path run_dir;
  nlohmann::json stats;
  std::vector<cluster::ClusterRecord> records;
};

// Single-language AST type-III baseline over the same snippets detect would see.
BaselineResult baseline_ast(const RunConfig& cfg);

// Converts an external pair list into the cluster report schema. Member
// metadata comes from `manifest_run` when given.
std::vector<cluster::ClusterRecord> import_pairs(const std::filesystem::path& pairs, const std::filesystem::path& out,
                                                 const std::optional<std::filesystem::path>& manifest_run = {});

}  // namespace simclone::pipeline
