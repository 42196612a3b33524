#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "model/types.hpp"

namespace simclone::pipeline {

struct RunConfig {
  std::vector<LanguageId> languages;
  std::vector<std::string> corpus;
  int min_stmt = 2;
  int args_max = 5;
  std::size_t inputs = 256;
  double sim_t = 1.0;
  double timeout_s = 5.0;
  std::uint64_t seed = 1;
  int workers = 0;  // 0: one per hardware thread
  std::string out = "simclone-out";
  std::map<std::string, std::string> shims;  // language token -> worker command
  bool permute = true;
  double real_tolerance = 1e-6;
  bool exception_match = false;

  [[nodiscard]] int effective_workers() const;
  // Throws Error(config) on out-of-range values.
  void check() const;
};

nlohmann::json config_to_json(const RunConfig& cfg);
// Keys absent from `j` keep their value in `base`. Unknown keys and unknown
// language names raise Error(config).
RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {});
RunConfig load_config_file(const std::filesystem::path& path, RunConfig base = {});

LanguageId parse_language(const std::string& name);
std::vector<LanguageId> parse_languages(const std::string& list);

}  // namespace simclone::pipeline
