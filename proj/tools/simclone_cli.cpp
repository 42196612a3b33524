#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "simclone/simclone.h"

namespace {

struct Flags {
  std::string config;
  std::string lang;
  std::vector<std::string> corpus;
  std::vector<std::string> shims;
  int min_stmt = 0;
  int args_max = 0;
  long long inputs = 0;
  double sim_t = 0;
  double timeout = 0;
  unsigned long long seed = 0;
  int workers = 0;
  std::string out;
  bool no_permute = false;
  bool quiet = false;
};

int exit_code(simclone_status s) {
  switch (s) {
    case SIMCLONE_OK: return 0;
    case SIMCLONE_E_CONFIG:
    case SIMCLONE_E_INVALID_ARGUMENT:
    case SIMCLONE_E_MISSING_SHIM: return 2;
    default: return 1;
  }
}

int report_failure(simclone_status s) {
  std::cerr << "simclone: " << simclone_status_name(s) << ": " << simclone_last_error() << "\n";
  return exit_code(s);
}

void progress(const char* msg, void*) { std::cerr << "[simclone] " << msg << "\n"; }

void add_run_flags(CLI::App* cmd, Flags& f, bool with_shims) {
  cmd->add_option("--config", f.config, "JSON configuration file; flags override its values");
  cmd->add_option("--lang", f.lang, "languages to analyse, comma separated (python, java)");
  cmd->add_option("--corpus", f.corpus, "corpus file or directory (repeatable)");
  cmd->add_option("--min-stmt", f.min_stmt, "minimum statements per snippet (default 2)");
  cmd->add_option("--args-max", f.args_max, "maximum arguments per function (default 5)");
  cmd->add_option("--inputs", f.inputs, "inputs per pool (default 256)");
  cmd->add_option("--sim-t", f.sim_t, "similarity threshold (default 1.0)");
  cmd->add_option("--timeout", f.timeout, "per-invocation time limit in seconds (default 5)");
  cmd->add_option("--seed", f.seed, "seed for input generation");
  cmd->add_option("--workers", f.workers, "parallel workers (default: hardware threads)");
  cmd->add_option("--out", f.out, "run directory (default simclone-out)");
  if (with_shims) {
    cmd->add_option("--shim", f.shims, "worker command for a language, LANG=CMD (repeatable)");
    cmd->add_flag("--no-permute", f.no_permute, "skip argument-order variants");
  }
  cmd->add_flag("-q,--quiet", f.quiet, "no progress output");
}

simclone_status build_config(CLI::App* cmd, const Flags& f, simclone_config* cfg) {
  simclone_status s = SIMCLONE_OK;
  auto given = [&](const char* opt) {
    const auto* o = cmd->get_option_no_throw(opt);
    return o != nullptr && o->count() > 0;
  };
  auto set = [&](const char* opt, const char* key, const std::string& value) {
    if (s == SIMCLONE_OK && given(opt)) s = simclone_config_set(cfg, key, value.c_str());
  };
  if (!f.config.empty()) s = simclone_config_load_file(cfg, f.config.c_str());
  set("--lang", "lang", f.lang);
  if (s == SIMCLONE_OK && given("--corpus")) {
    for (const auto& c : f.corpus) {
      s = simclone_config_set(cfg, "corpus", c.c_str());
      if (s != SIMCLONE_OK) break;
    }
  }
  set("--min-stmt", "min_stmt", std::to_string(f.min_stmt));
  set("--args-max", "args_max", std::to_string(f.args_max));
  set("--inputs", "inputs", std::to_string(f.inputs));
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", f.sim_t);
  set("--sim-t", "sim_t", buf);
  std::snprintf(buf, sizeof buf, "%.17g", f.timeout);
  set("--timeout", "timeout", buf);
  set("--seed", "seed", std::to_string(f.seed));
  set("--workers", "workers", std::to_string(f.workers));
  set("--out", "out", f.out);
  if (s == SIMCLONE_OK && f.no_permute) {
    s = simclone_config_set(cfg, "permute", "0");
  }
  for (const auto& spec : f.shims) {
    if (s != SIMCLONE_OK) break;
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::cerr << "simclone: --shim expects LANG=CMD, got '" << spec << "'\n";
      return SIMCLONE_E_CONFIG;
    }
    s = simclone_config_set_shim(cfg, spec.substr(0, eq).c_str(), spec.substr(eq + 1).c_str());
  }
  if (s == SIMCLONE_OK && !f.quiet) s = simclone_config_set_progress(cfg, progress, nullptr);
  return s;
}

int print_report(simclone_report* r) {
  std::cout << simclone_report_digest(r);
  std::cout << "run directory: " << simclone_report_run_dir(r) << "\n";
  simclone_report_free(r);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simclone: semantic code clone detection by input/output behaviour"};
  app.require_subcommand(1);
  app.set_version_flag("--version", simclone_version());

  Flags detect_flags;
  auto* detect = app.add_subcommand("detect", "find behavioural clone clusters in a corpus");
  add_run_flags(detect, detect_flags, true);

  Flags ast_flags;
  auto* ast = app.add_subcommand("baseline-ast", "AST type-III baseline over one language");
  add_run_flags(ast, ast_flags, false);

  std::string run_dir;
  Flags val_flags;
  auto* validate = app.add_subcommand("validate", "re-execute clusters on fresh inputs and report precision");
  validate->add_option("run", run_dir, "run directory of a previous detect")->required();
  validate->add_option("--seed", val_flags.seed, "seed for the fresh inputs (default: the detection seed)");
  validate->add_option("--workers", val_flags.workers, "parallel workers");
  validate->add_option("--shim", val_flags.shims, "worker command for a language, LANG=CMD (repeatable)");
  validate->add_flag("-q,--quiet", val_flags.quiet, "no progress output");

  std::string pairs;
  std::string import_out = "simclone-import";
  std::string manifest_run;
  auto* import = app.add_subcommand("import-pairs", "group an external clone pair list into clusters");
  import->add_option("pairs", pairs, "pair list: one 'a,b' per line or JSON [a,b]")->required();
  import->add_option("--out", import_out, "output directory");
  import->add_option("--manifest", manifest_run, "run directory whose manifest describes the ids");

  CLI11_PARSE(app, argc, argv);

  simclone_config* cfg = nullptr;
  if (simclone_config_new(&cfg) != SIMCLONE_OK) return report_failure(SIMCLONE_E_INTERNAL);
  simclone_report* report = nullptr;
  simclone_status s = SIMCLONE_OK;
  if (detect->parsed()) {
    s = build_config(detect, detect_flags, cfg);
    if (s == SIMCLONE_OK) s = simclone_detect(cfg, &report);
  } else if (ast->parsed()) {
    s = build_config(ast, ast_flags, cfg);
    if (s == SIMCLONE_OK) s = simclone_baseline_ast(cfg, &report);
  } else if (validate->parsed()) {
    s = build_config(validate, val_flags, cfg);
    if (s == SIMCLONE_OK) s = simclone_validate(run_dir.c_str(), cfg, &report);
  } else if (import->parsed()) {
    s = simclone_import_pairs(pairs.c_str(), import_out.c_str(), manifest_run.empty() ? nullptr : manifest_run.c_str(),
                              &report);
  }
  simclone_config_free(cfg);
  if (s != SIMCLONE_OK) return report_failure(s);
  return print_report(report);
}
