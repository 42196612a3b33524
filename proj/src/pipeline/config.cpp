#include "pipeline/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "model/error.hpp"

namespace simclone::pipeline {

using nlohmann::json;

int RunConfig::effective_workers() const {
  if (workers > 0) return workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

void RunConfig::check() const {
  auto fail = [](const std::string& m) { throw Error(ErrorCode::config, m); };
  if (min_stmt < 1) fail("min_stmt must be at least 1");
  if (args_max < 1) fail("args_max must be at least 1");
  if (inputs < 1) fail("inputs must be at least 1");
  if (!(sim_t >= 0.0 && sim_t <= 1.0)) fail("sim_t must lie in [0, 1]");
  if (!(timeout_s > 0.0)) fail("timeout must be positive");
  if (workers < 0) fail("workers must be non-negative");
  if (out.empty()) fail("output directory is empty");
  if (!(real_tolerance >= 0.0)) fail("real_tolerance must be non-negative");
}

LanguageId parse_language(const std::string& name) {
  auto lang = language_from_name(name);
  if (!lang) throw Error(ErrorCode::config, "unknown language '" + name + "'");
  return *lang;
}

std::vector<LanguageId> parse_languages(const std::string& list) {
  std::vector<LanguageId> out;
  std::istringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    const auto lang = parse_language(item);
    if (std::find(out.begin(), out.end(), lang) == out.end()) out.push_back(lang);
  }
  return out;
}

json config_to_json(const RunConfig& cfg) {
  json langs = json::array();
  for (const auto& l : cfg.languages) langs.push_back(std::string(l.token()));
  return {{"languages", langs},
          {"corpus", cfg.corpus},
          {"min_stmt", cfg.min_stmt},
          {"args_max", cfg.args_max},
          {"inputs", cfg.inputs},
          {"sim_t", cfg.sim_t},
          {"timeout", cfg.timeout_s},
          {"seed", cfg.seed},
          {"workers", cfg.workers},
          {"out", cfg.out},
          {"shims", cfg.shims},
          {"permute", cfg.permute},
          {"real_tolerance", cfg.real_tolerance},
          {"exception_match", cfg.exception_match}};
}

RunConfig config_from_json(const json& j, RunConfig cfg) {
  static const std::set<std::string> known = {"languages", "corpus", "min_stmt", "args_max", "inputs",
                                              "sim_t",     "timeout", "seed",    "workers",  "out",
                                              "shims",     "permute", "real_tolerance", "exception_match"};
  if (!j.is_object()) throw Error(ErrorCode::config, "configuration must be a JSON object");
  for (const auto& [k, v] : j.items()) {
    if (!known.count(k)) throw Error(ErrorCode::config, "unknown configuration key '" + k + "'");
  }
  try {
    if (j.contains("languages")) {
      cfg.languages.clear();
      for (const auto& l : j["languages"]) cfg.languages.push_back(parse_language(l.get<std::string>()));
    }
    if (j.contains("corpus")) {
      cfg.corpus = j["corpus"].is_string() ? std::vector<std::string>{j["corpus"].get<std::string>()}
                                           : j["corpus"].get<std::vector<std::string>>();
    }
    if (j.contains("min_stmt")) cfg.min_stmt = j["min_stmt"].get<int>();
    if (j.contains("args_max")) cfg.args_max = j["args_max"].get<int>();
    if (j.contains("inputs")) cfg.inputs = j["inputs"].get<std::size_t>();
    if (j.contains("sim_t")) cfg.sim_t = j["sim_t"].get<double>();
    if (j.contains("timeout")) cfg.timeout_s = j["timeout"].get<double>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("workers")) cfg.workers = j["workers"].get<int>();
    if (j.contains("out")) cfg.out = j["out"].get<std::string>();
    if (j.contains("shims")) {
      for (const auto& [k, v] : j["shims"].items()) {
        cfg.shims[std::string(parse_language(k).token())] = v.get<std::string>();
      }
    }
    if (j.contains("permute")) cfg.permute = j["permute"].get<bool>();
    if (j.contains("real_tolerance")) cfg.real_tolerance = j["real_tolerance"].get<double>();
    if (j.contains("exception_match")) cfg.exception_match = j["exception_match"].get<bool>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::config, std::string("bad configuration value: ") + e.what());
  }
  return cfg;
}

RunConfig load_config_file(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::config, "cannot read configuration " + path.string());
  const json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::config, path.string() + " is not valid JSON");
  return config_from_json(j, std::move(base));
}

}  // namespace simclone::pipeline
