#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "exec/adapter.hpp"
#include "inputs/pool.hpp"
#include "model/error.hpp"
#include "pipeline/config.hpp"
#include "pipeline/corpus.hpp"
#include "pipeline/pipeline.hpp"

using namespace simclone;
using namespace simclone::pipeline;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  auto d = fs::temp_directory_path() / ("simclone_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

void put(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

bool have_python() { return std::system("python3 -c 'import json' >/dev/null 2>&1") == 0; }

std::string py_worker() { return std::string("python3 ") + SIMCLONE_MINI_PY_WORKER; }

// Loop-based and library sums plus unrelated functions.
fs::path sum_corpus() {
  auto root = fresh_dir("corpus_sum") / "contest";
  put(root / "sum_array" / "alice" / "loop.py",
      "def func_db8e(a):\n"
      "    n = len(a)\n"
      "    sum0 = [0] * (n + 1)\n"
      "    for i in xrange(n):\n"
      "        sum0[i + 1] = sum0[i] + a[i]\n"
      "    allv = sum0[-1]\n"
      "    return allv\n");
  put(root / "sum_array" / "bob" / "lib.py",
      "def func_43df(items):\n"
      "    _sum = sum(items)\n"
      "    j = len(items) - 1\n"
      "    return _sum\n");
  put(root / "misc" / "carol" / "other.py",
      "def count_words(s):\n"
      "    parts = s.split(' ')\n"
      "    n = len(parts)\n"
      "    return n\n"
      "\n"
      "def poly(x):\n"
      "    y = x * x\n"
      "    z = y + 3 * x\n"
      "    return z - 7\n"
      "\n"
      "def maxi(a):\n"
      "    best = a[0]\n"
      "    for v in a:\n"
      "        if v > best:\n"
      "            best = v\n"
      "    return best\n"
      "\n"
      "def shout(s):\n"
      "    t = s.upper()\n"
      "    u = t + '!'\n"
      "    return u\n"
      "\n"
      "def halve(x):\n"
      "    h = x // 2\n"
      "    r = h - 1\n"
      "    return r\n");
  return root;
}

RunConfig base_config(const fs::path& corpus, const fs::path& out) {
  RunConfig cfg;
  cfg.languages = {LanguageId::python()};
  cfg.corpus = {corpus.string()};
  cfg.out = out.string();
  cfg.inputs = 64;
  cfg.timeout_s = 5;
  cfg.workers = 2;
  cfg.shims["python"] = py_worker();
  return cfg;
}

bool has_member(const cluster::ClusterRecord& r, const std::string& origin_prefix) {
  for (const auto& m : r.members) {
    if (m.origin.rfind(origin_prefix, 0) == 0) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("config defaults, overrides and rejection") {
  RunConfig d;
  CHECK(d.min_stmt == 2);
  CHECK(d.args_max == 5);
  CHECK(d.inputs == 256);
  CHECK(d.sim_t == 1.0);
  CHECK(d.timeout_s == 5.0);
  auto cfg = config_from_json(nlohmann::json{{"languages", {"java"}}, {"inputs", 8}, {"shims", {{"java", "w"}}}});
  CHECK(cfg.languages == std::vector<LanguageId>{LanguageId::java()});
  CHECK(cfg.inputs == 8);
  CHECK(cfg.min_stmt == 2);
  auto round = config_from_json(config_to_json(cfg));
  CHECK(config_to_json(round) == config_to_json(cfg));
  auto code_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::io;
  };
  CHECK(code_of([] { parse_languages("python,cobol"); }) == ErrorCode::config);
  CHECK(code_of([] { config_from_json(nlohmann::json{{"colour", 1}}); }) == ErrorCode::config);
  CHECK(code_of([] { config_from_json(nlohmann::json{{"inputs", "many"}}); }) == ErrorCode::config);
  CHECK(code_of([] {
          RunConfig c;
          c.sim_t = 1.5;
          c.check();
        }) == ErrorCode::config);
  CHECK(parse_languages("java,python,java").size() == 2);
}

TEST_CASE("corpus walker recognises problem/author layouts") {
  auto root = sum_corpus();
  put(root / "notes.txt", "ignored");
  auto files = collect_corpus({root.string()}, {});
  REQUIRE(files.size() == 3);
  CHECK(files[0].display == "contest/misc/carol/other.py");
  CHECK(files[0].provenance.problem == "misc");
  CHECK(files[0].provenance.author == "carol");
  CHECK(collect_corpus({root.string()}, {LanguageId::java()}).empty());
  CHECK_THROWS_AS(collect_corpus({(root / "absent").string()}, {}), Error);
}

TEST_CASE("detect needs a worker for every requested language") {
  auto root = sum_corpus();
  auto cfg = base_config(root, fresh_dir("run_noshim"));
  cfg.shims.clear();
  try {
    detect(cfg);
    FAIL("expected a missing worker error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::missing_shim);
    CHECK(std::string(e.what()).find("python") != std::string::npos);
  }
}

TEST_CASE("huge min_stmt gives an empty report") {
  auto root = sum_corpus();
  auto cfg = base_config(root, fresh_dir("run_empty"));
  cfg.min_stmt = 1000000;
  auto res = detect(cfg);
  CHECK(res.stats["snippets"] == 0);
  CHECK(res.records.empty());
  CHECK(slurp(res.run_dir / "report" / "clusters.jsonl").empty());
  CHECK(slurp(res.run_dir / "report" / "digest.txt").find("no clusters") != std::string::npos);
}

TEST_CASE("detect wiring with replayed behaviour") {
  auto root = sum_corpus();
  auto cfg = base_config(root, fresh_dir("run_replay"));
  cfg.shims.clear();
  Hooks hooks;
  // every function answers with its arity
  hooks.adapters = [](const synth::SynthesizedFunction& f) -> exec::AdapterFactory {
    const auto n = static_cast<std::int64_t>(f.signature.args.size());
    return [n] { return std::make_unique<exec::CallableAdapter>([n](const Tuple&) { return Value::integer(n); }); };
  };
  auto res = detect(cfg, hooks);
  CHECK(res.stats["functions"].get<std::size_t>() > 0);
  CHECK(res.stats["profiles"] == res.stats["functions"].get<std::size_t>() - res.stats["input_errors"].get<std::size_t>());
  CHECK(res.stats["clones"].get<std::size_t>() <= res.stats["functions"].get<std::size_t>());
  CHECK(fs::exists(res.run_dir / "work" / "manifest.jsonl"));
  CHECK(fs::exists(res.run_dir / "run.json"));
  CHECK(!fs::is_empty(res.run_dir / "pools"));
  CHECK(!fs::is_empty(res.run_dir / "profiles"));
  const auto manifest = synth::read_manifest(res.run_dir);
  std::set<std::string> ids;
  for (const auto& f : manifest) ids.insert(f.id);
  for (const auto& r : res.records) {
    for (const auto& m : r.members) CHECK(ids.count(m.id) == 1);
  }
}

TEST_CASE("end to end: the two sums cluster, validate and reproduce") {
  if (!have_python()) {
    MESSAGE("python3 unavailable; skipped");
    return;
  }
  auto root = sum_corpus();
  auto cfg = base_config(root, fresh_dir("run_sum_a"));
  auto res = detect(cfg);
  const cluster::ClusterRecord* sums = nullptr;
  for (const auto& r : res.records) {
    if (has_member(r, "contest/sum_array/alice/loop.py") && has_member(r, "contest/sum_array/bob/lib.py")) sums = &r;
  }
  REQUIRE(sums != nullptr);
  for (const auto& r : res.records) {
    for (const auto& m : r.members) CHECK(m.language == "python");
  }

  auto cfg_b = cfg;
  cfg_b.out = fresh_dir("run_sum_b").string();
  cfg_b.workers = 1;
  auto res_b = detect(cfg_b);
  for (const char* f : {"clusters.jsonl", "digest.txt", "stats.json"}) {
    CHECK(slurp(res.run_dir / "report" / f) == slurp(res_b.run_dir / "report" / f));
  }

  auto v1 = validate_run(res.run_dir);
  CHECK(v1.report.summary.clusters == res.records.size());
  for (const auto& r : v1.records) {
    if (r.id == sums->id) CHECK(r.validity == Validity::valid);
  }
  const auto report1 = slurp(res.run_dir / "report" / "clusters.jsonl");
  CHECK(report1.find("\"kind\":\"validation\"") != std::string::npos);
  auto v2 = validate_run(res.run_dir);
  CHECK(slurp(res.run_dir / "report" / "clusters.jsonl") == report1);
  CHECK(v2.report.summary.precision == v1.report.summary.precision);
  CHECK(slurp(res.run_dir / "report" / "digest.txt").find("precision") != std::string::npos);
}

TEST_CASE("a crashing function does not abort the run") {
  if (!have_python()) {
    MESSAGE("python3 unavailable; skipped");
    return;
  }
  auto root = fresh_dir("corpus_crash") / "c";
  put(root / "boom.py",
      "import os\n"
      "def boom(x):\n"
      "    y = x + 1\n"
      "    os.kill(os.getpid(), 11)\n"
      "    return y\n"
      "def fine(x):\n"
      "    y = x + 1\n"
      "    z = y * 2\n"
      "    return z\n");
  auto cfg = base_config(root, fresh_dir("run_crash"));
  cfg.inputs = 8;
  auto res = detect(cfg);
  CHECK(res.stats["crashes"].get<std::size_t>() > 0);
  CHECK(res.stats["profiles"].get<std::size_t>() > 0);
}

TEST_CASE("validation refuses tampered pools and missing runs") {
  auto root = sum_corpus();
  auto cfg = base_config(root, fresh_dir("run_tamper"));
  cfg.shims.clear();
  Hooks hooks;
  hooks.adapters = [](const synth::SynthesizedFunction&) -> exec::AdapterFactory {
    return [] { return std::make_unique<exec::CallableAdapter>([](const Tuple&) { return Value::integer(1); }); };
  };
  auto res = detect(cfg, hooks);
  REQUIRE(!res.records.empty());
  for (const auto& e : fs::directory_iterator(res.run_dir / "pools")) {
    auto text = slurp(e.path());
    const auto nl = text.find('\n');
    REQUIRE(nl != std::string::npos);
    text[text.size() - 3] = text[text.size() - 3] == '1' ? '2' : '1';
    put(e.path(), text);
  }
  try {
    validate_run(res.run_dir, {}, hooks);
    FAIL("expected a checksum error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::checksum);
  }
  try {
    validate_run(fresh_dir("run_absent"), {}, hooks);
    FAIL("expected missing artifacts");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::missing_artifacts);
  }
}

TEST_CASE("ast baseline over a corpus") {
  auto root = fresh_dir("corpus_ast") / "ast";
  put(root / "a.py",
      "def one(xs):\n"
      "    total = 0\n"
      "    for x in xs:\n"
      "        total += x\n"
      "    return total\n");
  put(root / "b.py",
      "def two(items):\n"
      "    acc = 5\n"
      "    for it in items:\n"
      "        acc += it\n"
      "    return acc\n");
  auto sums = sum_corpus();
  RunConfig cfg;
  cfg.languages = {LanguageId::python()};
  cfg.corpus = {root.string(), sums.string()};
  cfg.out = fresh_dir("run_ast").string();
  cfg.min_stmt = 3;
  auto res = baseline_ast(cfg);
  bool twins = false;
  for (const auto& r : res.records) {
    CHECK(r.method == "ast-type3");
    if (has_member(r, "ast/a.py") && has_member(r, "ast/b.py")) twins = true;
    CHECK_FALSE((has_member(r, "contest/sum_array/alice") && has_member(r, "contest/sum_array/bob")));
  }
  CHECK(twins);
  cfg.languages = {LanguageId::python(), LanguageId::java()};
  try {
    baseline_ast(cfg);
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::config);
    CHECK(std::string(e.what()).find("one language") != std::string::npos);
  }
}

TEST_CASE("imported pair lists become clusters") {
  auto dir = fresh_dir("import");
  put(dir / "pairs.txt", "m1,m2\nm3,m4\nm2,m5\n");
  auto recs = import_pairs(dir / "pairs.txt", dir / "out");
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].members.size() == 3);
  CHECK(recs[0].method == "imported");
  CHECK(fs::exists(dir / "out" / "report" / "clusters.jsonl"));
}
