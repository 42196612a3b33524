#include "pipeline/pipeline.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <mutex>
#include <set>

#include "cluster/similarity.hpp"
#include "exec/engine.hpp"
#include "exec/process_adapter.hpp"
#include "inputs/constants.hpp"
#include "inputs/pool.hpp"
#include "inputs/resources.hpp"
#include "inputs/sampler.hpp"
#include "model/error.hpp"
#include "pipeline/corpus.hpp"
#include "segment/segmenter.hpp"
#include "validate/ast_baseline.hpp"

namespace simclone::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kRunSchema = 1;

class RunLog {
 public:
  RunLog(const fs::path& path, std::function<void(const std::string&)> echo, bool append = true)
      : out_(path, append ? std::ios::app : std::ios::trunc), echo_(std::move(echo)) {}

  void operator()(const std::string& msg) {
    std::lock_guard lock(mu_);
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
    out_ << stamp << " " << msg << "\n";
    out_.flush();
    if (echo_) echo_(msg);
  }

 private:
  std::mutex mu_;
  std::ofstream out_;
  std::function<void(const std::string&)> echo_;
};

void write_text(const fs::path& path, const std::string& text) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
}

json read_json(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::missing_artifacts, "missing " + path.string());
  const json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::load, path.string() + " is not valid JSON");
  return j;
}

std::vector<LanguageId> effective_languages(const RunConfig& cfg, const std::vector<CorpusFile>& files) {
  if (!cfg.languages.empty()) return cfg.languages;
  std::vector<LanguageId> out;
  for (const auto& f : files) {
    if (std::find(out.begin(), out.end(), f.language) == out.end()) out.push_back(f.language);
  }
  std::sort(out.begin(), out.end(), [](const LanguageId& a, const LanguageId& b) { return a.token() < b.token(); });
  return out;
}

exec::AdapterFactory worker_factory(const std::map<std::string, std::string>& shims, const LanguageId& lang,
                                    const fs::path& run_dir) {
  auto it = shims.find(std::string(lang.token()));
  if (it == shims.end()) {
    throw Error(ErrorCode::missing_shim, "no worker configured for language '" + std::string(lang.token()) + "'");
  }
  exec::WorkerCommand cmd{it->second, fs::absolute(run_dir / "resources.json").string(),
                          fs::absolute(run_dir / "report" / ("worker-" + std::string(lang.token()) + ".log")).string(),
                          std::chrono::milliseconds(60000)};
  return [cmd] { return std::make_unique<exec::ProcessAdapter>(cmd); };
}

exec::LoadSpec load_spec(const synth::SynthesizedFunction& fn, const fs::path& run_dir, const NumericBounds& bounds) {
  return {fs::absolute(run_dir / fn.source_path).string(), fn.entry, canonical_signature(fn.signature, bounds)};
}

cluster::MemberTable member_table(const std::vector<synth::SynthesizedFunction>& fns) {
  cluster::MemberTable t;
  for (const auto& f : fns) t[f.id] = {f.id, std::string(f.language.token()), f.origin, f.whole_method};
  return t;
}

cluster::SimilarityConfig similarity_config(const RunConfig& cfg) {
  cluster::SimilarityConfig s;
  s.sim_t = cfg.sim_t;
  s.real_tolerance = cfg.real_tolerance;
  s.exception_match = cfg.exception_match;
  return s;
}

std::size_t count_clones(const std::vector<cluster::ClusterRecord>& records) {
  std::size_t n = 0;
  for (const auto& r : records) n += r.members.size();
  return n;
}

std::chrono::milliseconds timeout_ms(double seconds) {
  return std::chrono::milliseconds(std::max<long long>(1, static_cast<long long>(seconds * 1000.0 + 0.5)));
}

}  // namespace

DetectResult detect(const RunConfig& cfg, const Hooks& hooks) {
  cfg.check();
  if (cfg.corpus.empty()) throw Error(ErrorCode::config, "no corpus given");
  const fs::path run(cfg.out);
  std::error_code ec;
  for (const char* sub : {"work", "profiles", "report", "pools"}) fs::remove_all(run / sub, ec);
  fs::create_directories(run / "report", ec);
  if (ec) throw Error(ErrorCode::io, "cannot create " + run.string() + ": " + ec.message());
  RunLog log(run / "report" / "run.log", hooks.progress, false);

  const auto files = collect_corpus(cfg.corpus, cfg.languages);
  const auto languages = effective_languages(cfg, files);
  if (!hooks.adapters) {
    for (const auto& l : languages) worker_factory(cfg.shims, l, run);
  }
  const auto bounds = NumericBounds::for_languages(languages);
  log("corpus: " + std::to_string(files.size()) + " files");

  const auto parsed = parse_corpus(files);
  for (const auto& e : parsed.errors) log("parse error: " + e);

  // segmentation and synthesis
  synth::IdRegistry ids;
  synth::SynthConfig scfg;
  scfg.args_max = cfg.args_max;
  scfg.permute = cfg.permute;
  synth::SynthStats sstats;
  std::vector<synth::SynthesizedFunction> fns;
  for (std::size_t i = 0; i < parsed.files.size(); ++i) {
    for (const auto& snip : segment::segment_file(parsed.files[i], cfg.min_stmt, parsed.provenance[i])) {
      auto res = synthesize(snip, scfg, ids);
      sstats += res.stats;
      for (auto& f : res.functions) fns.push_back(std::move(f));
    }
  }
  log("synthesis: " + std::to_string(sstats.snippets) + " snippets, " + std::to_string(fns.size()) + " functions");
  synth::write_work(run, fns, bounds);

  // inputs
  std::vector<const lang::ParsedFile*> raw;
  for (const auto& f : parsed.files) raw.push_back(f.get());
  const auto bank = inputs::mine_constants(raw);
  auto resources = std::make_shared<const inputs::FileResourcePool>(inputs::FileResourcePool::from_bank(bank, cfg.seed));
  resources->save(run / "resources.json");
  auto base = std::make_shared<const inputs::Sampler>(bank, resources, bounds, inputs::Sampler::Mode::multimodal);
  auto fuzz = std::make_shared<const inputs::Sampler>(bank, resources, bounds, inputs::Sampler::Mode::triangular);
  inputs::PoolStore store(run / "pools", base, fuzz, bounds);

  std::vector<exec::FunctionJob> jobs;
  std::vector<const synth::SynthesizedFunction*> job_fns;
  std::map<std::string, exec::AdapterFactory> factories;
  std::size_t input_errors = 0;
  for (const auto& f : fns) {
    std::shared_ptr<const inputs::InputPool> pool;
    try {
      pool = store.get_pool(f.signature, cfg.inputs, cfg.seed);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::unsupported_type) throw;
      ++input_errors;
      log("no inputs for " + f.id + ": " + e.what());
      continue;
    }
    exec::FunctionJob job;
    job.id = f.id;
    job.signature = f.signature;
    job.load = load_spec(f, run, bounds);
    if (hooks.adapters) {
      job.factory = hooks.adapters(f);
    } else {
      const std::string lang(f.language.token());
      if (!factories.count(lang)) factories[lang] = worker_factory(cfg.shims, f.language, run);
      job.factory = factories[lang];
    }
    job.pool = std::move(pool);
    jobs.push_back(std::move(job));
    job_fns.push_back(&f);
  }
  log("inputs: " + std::to_string(store.write_count()) + " pools written");

  // execution
  exec::ExecConfig ecfg;
  ecfg.timeout = timeout_ms(cfg.timeout_s);
  ecfg.workers = cfg.effective_workers();
  const auto results = exec::execute_all(jobs, ecfg, [&](std::size_t done) {
    if (done % 100 == 0 || done == jobs.size()) log("executed " + std::to_string(done) + "/" + std::to_string(jobs.size()));
  });
  exec::ExecStats estats;
  std::vector<const IOProfile*> profiles;
  for (std::size_t k = 0; k < results.size(); ++k) {
    const auto& r = results[k];
    estats.loaded += r.stats.loaded;
    estats.load_errors += r.stats.load_errors;
    estats.timeouts += r.stats.timeouts;
    estats.crashes += r.stats.crashes;
    if (!r.profile) {
      log("load failed for " + jobs[k].id + ": " + r.error);
      continue;
    }
    exec::write_profile(run / "profiles", *r.profile);
    profiles.push_back(&*r.profile);
  }

  // clustering
  const auto raw_clusters = cluster::find_clusters(profiles, similarity_config(cfg));
  auto records = cluster::build_records(raw_clusters, member_table(fns), "io");
  std::size_t cross = 0;
  for (const auto& r : records) cross += r.cross_language() ? 1 : 0;

  json stats = {{"schema", kRunSchema},
                {"files", files.size()},
                {"parse_errors", parsed.errors.size()},
                {"snippets", sstats.snippets},
                {"synthesis_errors", sstats.synthesis_errors},
                {"no_return", sstats.no_return},
                {"unsupported_type", sstats.unsupported_type},
                {"too_many_args", sstats.too_many_args},
                {"zero_args", sstats.zero_args},
                {"base_functions", sstats.base_functions},
                {"functions", fns.size()},
                {"input_errors", input_errors},
                {"pools", store.write_count()},
                {"loaded", estats.loaded},
                {"load_errors", estats.load_errors},
                {"timeouts", estats.timeouts},
                {"crashes", estats.crashes},
                {"profiles", profiles.size()},
                {"clusters", records.size()},
                {"clones", count_clones(records)},
                {"cross_language_clusters", cross}};
  json langs = json::array();
  for (const auto& l : languages) langs.push_back(std::string(l.token()));
  json roots = json::array();
  for (const auto& c : cfg.corpus) roots.push_back(fs::absolute(c).lexically_normal().string());
  json runinfo = {{"schema", kRunSchema},
                  {"config", config_to_json(cfg)},
                  {"languages", langs},
                  {"corpus_roots", roots},
                  {"bounds", {{"int_width", bounds.int_width}, {"real_width", bounds.real_width}}}};
  write_text(run / "run.json", runinfo.dump(2) + "\n");
  write_text(run / "report" / "stats.json", stats.dump(2) + "\n");
  cluster::write_records(run / "report" / "clusters.jsonl", records);
  write_text(run / "report" / "digest.txt", cluster::render_digest(records, stats));
  log("clusters: " + std::to_string(records.size()) + ", clones: " + std::to_string(count_clones(records)));
  return {run, std::move(stats), std::move(records)};
}

ValidateResult validate_run(const fs::path& run, const ValidateOptions& opts, const Hooks& hooks) {
  const json info = read_json(run / "run.json");
  RunConfig cfg = config_from_json(info.at("config"));
  for (const auto& [k, v] : opts.shims) cfg.shims[k] = v;
  if (opts.workers) cfg.workers = *opts.workers;
  const std::uint64_t seed = opts.seed.value_or(cfg.seed);
  const NumericBounds bounds{info.at("bounds").at("int_width").get<int>(), info.at("bounds").at("real_width").get<int>()};

  auto [records, previous] = cluster::read_records(run / "report" / "clusters.jsonl");
  const auto fns = synth::read_manifest(run);
  std::map<std::string, const synth::SynthesizedFunction*> by_id;
  for (const auto& f : fns) by_id[f.id] = &f;
  for (const auto& r : records) {
    for (const auto& m : r.members) {
      if (!by_id.count(m.id)) throw Error(ErrorCode::missing_artifacts, "cluster member " + m.id + " is not in the manifest");
    }
  }
  RunLog log(run / "report" / "run.log", hooks.progress);
  log("validation: " + std::to_string(records.size()) + " clusters, seed " + std::to_string(seed));

  auto resources = std::make_shared<const inputs::FileResourcePool>(inputs::FileResourcePool::load(run / "resources.json"));
  const auto bank = inputs::ConstantBank::defaults();
  auto base = std::make_shared<const inputs::Sampler>(bank, resources, bounds, inputs::Sampler::Mode::multimodal);
  auto fuzz = std::make_shared<const inputs::Sampler>(bank, resources, bounds, inputs::Sampler::Mode::triangular);
  inputs::PoolStore store(run / "pools", base, fuzz, bounds);

  // the detection pools must still be intact before fresh ones are drawn
  for (const auto& r : records) {
    for (const auto& m : r.members) {
      const auto& sig = by_id.at(m.id)->signature;
      if (!fs::exists(store.path_for(pool_key(sig, bounds), cfg.inputs, cfg.seed, inputs::PoolKind::base))) {
        throw Error(ErrorCode::missing_artifacts, "missing input pool for " + m.id);
      }
      store.get_pool(sig, cfg.inputs, cfg.seed);
    }
  }

  std::map<std::string, exec::AdapterFactory> factories;
  std::mutex factory_mu;
  exec::ExecConfig ecfg;
  ecfg.timeout = timeout_ms(cfg.timeout_s);
  auto rerun = [&](const std::string& id) -> std::optional<IOProfile> {
    const auto& f = *by_id.at(id);
    exec::FunctionJob job;
    job.id = f.id;
    job.signature = f.signature;
    job.load = load_spec(f, run, bounds);
    job.pool = store.fuzz_pool(f.signature, cfg.inputs, seed);
    if (hooks.adapters) {
      job.factory = hooks.adapters(f);
    } else {
      std::lock_guard lock(factory_mu);
      const std::string lang(f.language.token());
      if (!factories.count(lang)) factories[lang] = worker_factory(cfg.shims, f.language, run);
      job.factory = factories[lang];
    }
    auto res = exec::execute_profile(job, ecfg);
    if (!res.profile) log("validation load failed for " + id + ": " + res.error);
    return res.profile;
  };
  auto report = validate::validate_clusters(records, rerun, similarity_config(cfg), cfg.effective_workers());
  report.summary.seed = seed;
  report.summary.inputs = cfg.inputs;
  cluster::write_records(run / "report" / "clusters.jsonl", records, report.summary);
  json stats = json::object();
  try {
    stats = read_json(run / "report" / "stats.json");
  } catch (const Error&) {
  }
  write_text(run / "report" / "digest.txt", cluster::render_digest(records, stats, report.summary));
  log("validation: " + std::to_string(report.summary.valid) + " valid, " +
      std::to_string(report.summary.false_positives) + " false positives");
  return {std::move(report), std::move(records)};
}

BaselineResult baseline_ast(const RunConfig& cfg) {
  cfg.check();
  if (cfg.languages.size() != 1) {
    throw Error(ErrorCode::config, "the AST baseline compares one language at a time; pass exactly one --lang");
  }
  if (cfg.corpus.empty()) throw Error(ErrorCode::config, "no corpus given");
  const fs::path run(cfg.out);
  std::error_code ec;
  fs::create_directories(run / "report", ec);
  RunLog log(run / "report" / "run.log", {}, false);
  const auto files = collect_corpus(cfg.corpus, cfg.languages);
  const auto parsed = parse_corpus(files);
  for (const auto& e : parsed.errors) log("parse error: " + e);
  std::vector<validate::AstItem> items;
  cluster::MemberTable table;
  for (std::size_t i = 0; i < parsed.files.size(); ++i) {
    for (const auto& snip : segment::segment_file(parsed.files[i], cfg.min_stmt, parsed.provenance[i])) {
      const std::string origin = snip.origin();
      if (table.count(origin)) continue;
      table[origin] = {origin, std::string(snip.language().token()), origin, snip.whole_method()};
      items.push_back({origin, validate::normalize(snip.statements())});
    }
  }
  auto records = cluster::build_records(validate::ast_type3_clones(items), table, "ast-type3");
  json stats = {{"schema", kRunSchema},
                {"method", "ast-type3"},
                {"files", files.size()},
                {"parse_errors", parsed.errors.size()},
                {"snippets", items.size()},
                {"clusters", records.size()},
                {"clones", count_clones(records)}};
  write_text(run / "report" / "stats.json", stats.dump(2) + "\n");
  cluster::write_records(run / "report" / "clusters.jsonl", records);
  write_text(run / "report" / "digest.txt", cluster::render_digest(records, stats));
  log("ast baseline: " + std::to_string(records.size()) + " clusters");
  return {run, std::move(stats), std::move(records)};
}

std::vector<cluster::ClusterRecord> import_pairs(const fs::path& pairs, const fs::path& out,
                                                 const std::optional<fs::path>& manifest_run) {
  std::ifstream in(pairs, std::ios::binary);
  if (!in) throw Error(ErrorCode::missing_artifacts, "missing " + pairs.string());
  const auto groups = cluster::group_pairs(cluster::parse_pairs(in));
  cluster::MemberTable table;
  if (manifest_run) table = member_table(synth::read_manifest(*manifest_run));
  auto records = cluster::build_records(groups, table, "imported");
  json stats = {{"schema", kRunSchema}, {"method", "imported"}, {"clusters", records.size()},
                {"clones", count_clones(records)}};
  write_text(out / "report" / "stats.json", stats.dump(2) + "\n");
  cluster::write_records(out / "report" / "clusters.jsonl", records);
  write_text(out / "report" / "digest.txt", cluster::render_digest(records, stats));
  return records;
}

}  // namespace simclone::pipeline
