#include "simclone/simclone.h"

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <optional>
#include <string>

#include "cluster/report.hpp"
#include "model/error.hpp"
#include "pipeline/config.hpp"
#include "pipeline/pipeline.hpp"

using namespace simclone;

struct simclone_config {
  pipeline::RunConfig cfg;
  bool seed_set = false;
  simclone_progress_fn progress = nullptr;
  void* progress_user = nullptr;
};

struct simclone_report {
  std::string run_dir;
  std::string json;
  std::string digest;
  std::size_t clusters = 0;
  std::size_t clones = 0;
  bool validated = false;
  double precision = 0.0;
};

namespace {

thread_local std::string last_error;

simclone_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return SIMCLONE_E_INVALID_ARGUMENT;
    case ErrorCode::config: return SIMCLONE_E_CONFIG;
    case ErrorCode::missing_shim: return SIMCLONE_E_MISSING_SHIM;
    case ErrorCode::parse: return SIMCLONE_E_PARSE;
    case ErrorCode::synthesis: return SIMCLONE_E_SYNTHESIS;
    case ErrorCode::unsupported_type: return SIMCLONE_E_UNSUPPORTED_TYPE;
    case ErrorCode::store: return SIMCLONE_E_STORE;
    case ErrorCode::checksum: return SIMCLONE_E_CHECKSUM;
    case ErrorCode::missing_artifacts: return SIMCLONE_E_MISSING_ARTIFACTS;
    case ErrorCode::pool_mismatch: return SIMCLONE_E_POOL_MISMATCH;
    case ErrorCode::insufficient_data: return SIMCLONE_E_INSUFFICIENT_DATA;
    case ErrorCode::load: return SIMCLONE_E_LOAD;
    case ErrorCode::protocol: return SIMCLONE_E_PROTOCOL;
    case ErrorCode::io: return SIMCLONE_E_IO;
  }
  return SIMCLONE_E_INTERNAL;
}

simclone_status fail(simclone_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

template <typename F>
simclone_status guarded(F&& f) {
  try {
    last_error.clear();
    return f();
  } catch (const Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::exception& e) {
    return fail(SIMCLONE_E_INTERNAL, e.what());
  } catch (...) {
    return fail(SIMCLONE_E_INTERNAL, "unknown failure");
  }
}

pipeline::Hooks hooks_of(const simclone_config* c) {
  pipeline::Hooks h;
  if (c && c->progress) {
    auto fn = c->progress;
    void* user = c->progress_user;
    h.progress = [fn, user](const std::string& m) { fn(m.c_str(), user); };
  }
  return h;
}

simclone_report* make_report(const std::string& run_dir, const nlohmann::json& stats,
                             const std::vector<cluster::ClusterRecord>& records,
                             const std::optional<cluster::ValidationSummary>& summary) {
  auto* r = new simclone_report;
  r->run_dir = run_dir;
  nlohmann::json clusters = nlohmann::json::array();
  for (const auto& rec : records) {
    clusters.push_back(cluster::record_to_json(rec));
    r->clones += rec.members.size();
  }
  r->clusters = records.size();
  r->json = nlohmann::json{{"stats", stats},
                           {"clusters", std::move(clusters)},
                           {"validation", summary ? cluster::summary_to_json(*summary) : nlohmann::json()}}
                .dump();
  r->digest = cluster::render_digest(records, stats, summary);
  if (summary) {
    r->validated = true;
    r->precision = summary->precision;
  }
  return r;
}

long long parse_int(const char* key, const char* value) {
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(value, &end, 10);
  if (errno || end == value || *end) throw Error(ErrorCode::config, std::string(key) + " expects an integer");
  return v;
}

double parse_real(const char* key, const char* value) {
  char* end = nullptr;
  const double v = std::strtod(value, &end);
  if (end == value || *end) throw Error(ErrorCode::config, std::string(key) + " expects a number");
  return v;
}

}  // namespace

extern "C" {

const char* simclone_version(void) { return "0.1.0"; }

const char* simclone_status_name(simclone_status status) {
  switch (status) {
    case SIMCLONE_OK: return "ok";
    case SIMCLONE_E_INVALID_ARGUMENT: return "invalid_argument";
    case SIMCLONE_E_CONFIG: return "config";
    case SIMCLONE_E_MISSING_SHIM: return "missing_shim";
    case SIMCLONE_E_PARSE: return "parse";
    case SIMCLONE_E_SYNTHESIS: return "synthesis";
    case SIMCLONE_E_UNSUPPORTED_TYPE: return "unsupported_type";
    case SIMCLONE_E_STORE: return "store";
    case SIMCLONE_E_CHECKSUM: return "checksum";
    case SIMCLONE_E_MISSING_ARTIFACTS: return "missing_artifacts";
    case SIMCLONE_E_POOL_MISMATCH: return "pool_mismatch";
    case SIMCLONE_E_INSUFFICIENT_DATA: return "insufficient_data";
    case SIMCLONE_E_LOAD: return "load";
    case SIMCLONE_E_PROTOCOL: return "protocol";
    case SIMCLONE_E_IO: return "io";
    case SIMCLONE_E_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* simclone_last_error(void) { return last_error.c_str(); }

simclone_status simclone_config_new(simclone_config** out) {
  if (!out) return fail(SIMCLONE_E_INVALID_ARGUMENT, "null output pointer");
  return guarded([&] {
    *out = new simclone_config;
    return SIMCLONE_OK;
  });
}

void simclone_config_free(simclone_config* cfg) { delete cfg; }

simclone_status simclone_config_set(simclone_config* c, const char* key, const char* value) {
  if (!c || !key || !value) return fail(SIMCLONE_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto& cfg = c->cfg;
    const std::string k = key;
    if (k == "lang") {
      cfg.languages = pipeline::parse_languages(value);
    } else if (k == "corpus") {
      cfg.corpus.emplace_back(value);
    } else if (k == "min_stmt") {
      cfg.min_stmt = static_cast<int>(parse_int(key, value));
    } else if (k == "args_max") {
      cfg.args_max = static_cast<int>(parse_int(key, value));
    } else if (k == "inputs") {
      const auto n = parse_int(key, value);
      if (n < 1) throw Error(ErrorCode::config, "inputs must be at least 1");
      cfg.inputs = static_cast<std::size_t>(n);
    } else if (k == "sim_t") {
      cfg.sim_t = parse_real(key, value);
    } else if (k == "timeout") {
      cfg.timeout_s = parse_real(key, value);
    } else if (k == "seed") {
      char* end = nullptr;
      errno = 0;
      cfg.seed = std::strtoull(value, &end, 0);
      if (errno || end == value || *end || *value == '-') throw Error(ErrorCode::config, "seed expects an unsigned integer");
      c->seed_set = true;
    } else if (k == "workers") {
      cfg.workers = static_cast<int>(parse_int(key, value));
    } else if (k == "out") {
      cfg.out = value;
    } else if (k == "permute") {
      cfg.permute = parse_int(key, value) != 0;
    } else if (k == "real_tolerance") {
      cfg.real_tolerance = parse_real(key, value);
    } else if (k == "exception_match") {
      cfg.exception_match = parse_int(key, value) != 0;
    } else {
      throw Error(ErrorCode::config, "unknown configuration key '" + k + "'");
    }
    cfg.check();
    return SIMCLONE_OK;
  });
}

simclone_status simclone_config_set_shim(simclone_config* c, const char* language, const char* command) {
  if (!c || !language || !command) return fail(SIMCLONE_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    c->cfg.shims[std::string(pipeline::parse_language(language).token())] = command;
    return SIMCLONE_OK;
  });
}

simclone_status simclone_config_load_file(simclone_config* c, const char* path) {
  if (!c || !path) return fail(SIMCLONE_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto before = c->cfg.seed;
    c->cfg = pipeline::load_config_file(path, c->cfg);
    if (c->cfg.seed != before) c->seed_set = true;
    c->cfg.check();
    return SIMCLONE_OK;
  });
}

simclone_status simclone_config_set_progress(simclone_config* c, simclone_progress_fn fn, void* user) {
  if (!c) return fail(SIMCLONE_E_INVALID_ARGUMENT, "null config");
  c->progress = fn;
  c->progress_user = user;
  return SIMCLONE_OK;
}

simclone_status simclone_config_to_json(const simclone_config* c, char** out) {
  if (!c || !out) return fail(SIMCLONE_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const std::string s = pipeline::config_to_json(c->cfg).dump(2);
    *out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!*out) throw std::bad_alloc();
    std::memcpy(*out, s.c_str(), s.size() + 1);
    return SIMCLONE_OK;
  });
}

void simclone_string_free(char* s) { std::free(s); }

simclone_status simclone_detect(const simclone_config* c, simclone_report** out) {
  if (!c || !out) return fail(SIMCLONE_E_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto res = pipeline::detect(c->cfg, hooks_of(c));
    *out = make_report(res.run_dir.string(), res.stats, res.records, std::nullopt);
    return SIMCLONE_OK;
  });
}

simclone_status simclone_validate(const char* run_dir, const simclone_config* overrides, simclone_report** out) {
  if (!run_dir || !out) return fail(SIMCLONE_E_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    pipeline::ValidateOptions opts;
    if (overrides) {
      opts.shims = overrides->cfg.shims;
      if (overrides->cfg.workers > 0) opts.workers = overrides->cfg.workers;
      if (overrides->seed_set) opts.seed = overrides->cfg.seed;
    }
    auto res = pipeline::validate_run(run_dir, opts, hooks_of(overrides));
    nlohmann::json stats = nlohmann::json::object();
    std::ifstream in(std::filesystem::path(run_dir) / "report" / "stats.json");
    if (in) stats = nlohmann::json::parse(in, nullptr, false);
    *out = make_report(run_dir, stats, res.records, res.report.summary);
    return SIMCLONE_OK;
  });
}

simclone_status simclone_baseline_ast(const simclone_config* c, simclone_report** out) {
  if (!c || !out) return fail(SIMCLONE_E_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto res = pipeline::baseline_ast(c->cfg);
    *out = make_report(res.run_dir.string(), res.stats, res.records, std::nullopt);
    return SIMCLONE_OK;
  });
}

simclone_status simclone_import_pairs(const char* pairs_path, const char* out_dir, const char* manifest_run,
                                      simclone_report** out) {
  if (!pairs_path || !out_dir || !out) return fail(SIMCLONE_E_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    std::optional<std::filesystem::path> manifest;
    if (manifest_run) manifest = manifest_run;
    auto records = pipeline::import_pairs(pairs_path, out_dir, manifest);
    nlohmann::json stats = {{"method", "imported"}, {"clusters", records.size()}};
    *out = make_report(out_dir, stats, records, std::nullopt);
    return SIMCLONE_OK;
  });
}

void simclone_report_free(simclone_report* report) { delete report; }

size_t simclone_report_cluster_count(const simclone_report* r) { return r ? r->clusters : 0; }

size_t simclone_report_clone_count(const simclone_report* r) { return r ? r->clones : 0; }

const char* simclone_report_run_dir(const simclone_report* r) { return r ? r->run_dir.c_str() : ""; }

const char* simclone_report_json(const simclone_report* r) { return r ? r->json.c_str() : "{}"; }

const char* simclone_report_digest(const simclone_report* r) { return r ? r->digest.c_str() : ""; }

simclone_status simclone_report_precision(const simclone_report* r, double* out) {
  if (!r || !out) return fail(SIMCLONE_E_INVALID_ARGUMENT, "null argument");
  if (!r->validated) return fail(SIMCLONE_E_INVALID_ARGUMENT, "report has not been validated");
  *out = r->precision;
  return SIMCLONE_OK;
}

}  // extern "C"
