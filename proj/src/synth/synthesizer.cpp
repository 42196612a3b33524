#include "synth/synthesizer.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "model/error.hpp"
#include "synth/java_types.hpp"
#include "synth/resolve.hpp"
#include "synth/type_infer.hpp"

namespace simclone::synth {

using lang::AstNode;
using lang::Span;

SynthStats& SynthStats::operator+=(const SynthStats& o) {
  snippets += o.snippets;
  synthesis_errors += o.synthesis_errors;
  no_return += o.no_return;
  unsupported_type += o.unsupported_type;
  too_many_args += o.too_many_args;
  zero_args += o.zero_args;
  base_functions += o.base_functions;
  functions += o.functions;
  return *this;
}

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex12(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return std::string(buf + 4, 12);
}

// Source text of `span` with the rewrites that fall inside it applied.
std::string rewritten(const lang::ParsedFile& file, Span span, const std::vector<Rewrite>& rewrites) {
  std::vector<const Rewrite*> inside;
  for (const auto& r : rewrites) {
    if (span.contains(r.span)) inside.push_back(&r);
  }
  std::sort(inside.begin(), inside.end(), [](const Rewrite* a, const Rewrite* b) { return a->span.begin < b->span.begin; });
  std::string out;
  std::uint32_t pos = span.begin;
  for (const auto* r : inside) {
    if (r->span.begin < pos) continue;
    out += file.slice({pos, r->span.begin});
    out += r->text;
    pos = r->span.end;
  }
  out += file.slice({pos, span.end});
  return out;
}

std::string rtrim(std::string s) {
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

// Leading whitespace of the line holding `offset`.
std::string line_indent(std::string_view text, std::uint32_t offset) {
  std::size_t start = text.rfind('\n', offset == 0 ? 0 : offset - 1);
  start = start == std::string_view::npos ? 0 : start + 1;
  std::size_t end = start;
  while (end < offset && (text[end] == ' ' || text[end] == '\t')) ++end;
  return std::string(text.substr(start, end - start));
}

std::string python_preamble(const lang::ParsedFile& file) {
  std::string out;
  for (const auto& m : file.module_items) {
    if (m.kind == lang::ModuleItem::Kind::other) continue;
    out += file.slice(m.span);
    out += "\n";
  }
  return out;
}

std::string java_package(const lang::ParsedFile& file) {
  for (const auto& m : file.module_items) {
    if (m.kind != lang::ModuleItem::Kind::other) continue;
    std::string_view t = file.slice(m.span);
    if (t.starts_with("package")) {
      std::string name(t.substr(7));
      name.erase(std::remove_if(name.begin(), name.end(), [](char c) { return c == ' ' || c == ';' || c == '\t' || c == '\n'; }),
                 name.end());
      return name;
    }
  }
  return {};
}

std::string java_preamble(const lang::ParsedFile& file, const std::string& package) {
  std::string out;
  if (!package.empty()) out += "package " + package + ";\n";
  for (const auto& m : file.module_items) {
    if (m.kind != lang::ModuleItem::Kind::import) continue;
    out += file.slice(m.span);
    out += "\n";
  }
  return out;
}

void collect_returns(const lang::Statement& s, std::vector<const AstNode*>& out) {
  if (s.nested_definition) return;
  if (s.head.kind == lang::NodeKind::return_stmt && !s.head.children.empty()) out.push_back(&s.head.children.front());
  for (const auto& c : s.clauses) {
    for (const auto& b : c.body) collect_returns(b, out);
  }
}

// Type of a snippet ending in `return expr`: every returned expression with a
// known type must agree.
TypeDescriptor python_return_type(std::span<const lang::Statement> stmts, const PythonTypes& types) {
  std::vector<const AstNode*> exprs;
  for (const auto& s : stmts) collect_returns(s, exprs);
  std::optional<TypeDescriptor> out;
  for (const auto* e : exprs) {
    const TypeDescriptor t = types.expression(*e);
    if (t.kind() == Kind::generic) continue;
    if (out && !(*out == t)) return TypeDescriptor::generic();
    out = t;
  }
  return out.value_or(TypeDescriptor::generic());
}

struct Candidate {
  std::string name;         // return variable or expression text
  std::string result;       // returned expression in the generated source
  TypeDescriptor type;
  std::string declared;     // Java return type
  std::vector<std::string> extra_args;  // not definitely assigned: supplied by the caller
};

struct Arg {
  std::string name;
  TypeDescriptor type;
  std::string decl;
};

}  // namespace

std::string IdRegistry::assign(const std::string& key) {
  std::lock_guard lock(mu_);
  for (int salt = 0;; ++salt) {
    const std::string material = salt == 0 ? key : key + "#" + std::to_string(salt);
    std::string id = "f_" + hex12(fnv1a(material));
    auto [it, inserted] = owner_.emplace(id, key);
    if (inserted || it->second == key) return id;
  }
}

std::string SourceTemplate::render(const std::string& entry, const std::vector<std::size_t>& order) const {
  std::string params_text;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k) params_text += ", ";
    params_text += params.at(order[k]);
  }
  std::string out = preamble;
  if (language == Lang::python) {
    if (!out.empty()) out += "\n\n";
    out += "def " + entry + "(" + params_text + "):\n";
    if (!body.empty()) out += indent + body + "\n";
    out += indent + "return " + result + "\n";
    return out;
  }
  if (!out.empty()) out += "\n";
  out += "public class " + entry + " {\n";
  out += "    public static " + ret_decl + " " + entry + "(" + params_text + ") throws Exception {\n";
  out += prologue;
  if (!body.empty()) out += "        " + body + "\n";
  out += "        return " + result + ";\n";
  out += "    }\n}\n";
  return out;
}

std::string SourceTemplate::entry(const std::string& id) const {
  if (language == Lang::python) return id;
  return (package.empty() ? id : package + "." + id) + "." + id;
}

NameResolver make_resolver(const lang::ParsedFile& file, const lang::FunctionInfo& fn) {
  if (file.language.name == Lang::java) return java_resolver(std::make_shared<JavaScope>(file, fn));
  return python_resolver(file);
}

namespace {

bool python_return_candidate(const VarInfo& v) { return v.modified && !v.header_bound && !v.last_def_constant; }

bool java_return_candidate(const VarInfo& v) {
  return v.modified && !v.header_bound && !(v.declared_nested && !v.declared_top) && !v.last_def_constant;
}

}  // namespace

IoVariables infer_io_variables(const segment::Snippet& snippet) {
  IoVariables out;
  const auto& file = *snippet.file;
  const bool java = file.language.name == Lang::java;
  const auto df = analyze(snippet.statements(), file.language.name, make_resolver(file, *snippet.function));
  out.errors = df.errors;
  out.args = df.arg_order;
  if (df.trailing_return) {
    out.returns.emplace_back(file.slice(df.trailing_return->span));
    return out;
  }
  for (const auto& name : df.def_order) {
    const auto* v = df.find(name);
    if (!(java ? java_return_candidate(*v) : python_return_candidate(*v))) continue;
    const bool definite = df.definite_at_end.count(name) > 0;
    if (!definite && java && v->declared_top) continue;
    out.returns.push_back(name);
  }
  return out;
}

SynthResult synthesize(const segment::Snippet& snippet, const SynthConfig& cfg, IdRegistry& ids) {
  SynthResult res;
  res.stats.snippets = 1;
  const auto& file = *snippet.file;
  const auto& fn = *snippet.function;
  const bool java = file.language.name == Lang::java;
  const std::string origin = snippet.origin();
  auto drop = [&](std::size_t SynthStats::*counter, const std::string& why) {
    ++(res.stats.*counter);
    res.log.push_back(origin + ": " + why);
  };

  std::shared_ptr<const JavaScope> scope;
  NameResolver resolver;
  if (java) {
    scope = std::make_shared<JavaScope>(file, fn);
    resolver = java_resolver(scope);
  } else {
    resolver = python_resolver(file);
  }
  const auto stmts = snippet.statements();
  const Dataflow df = analyze(stmts, file.language.name, resolver);
  if (!df.errors.empty()) {
    drop(&SynthStats::synthesis_errors, "synthesis error: " + df.errors.front());
    return res;
  }
  if (df.trailing_bare_return) {
    drop(&SynthStats::synthesis_errors, "synthesis error: ends with a bare return");
    return res;
  }
  std::optional<PythonTypes> py_types;
  if (!java) py_types.emplace(stmts);

  auto arg_of = [&](const std::string& name) -> std::optional<Arg> {
    if (!java) return Arg{name, py_types->of(name), name};
    auto declared = scope->declared_type(name);
    if (!declared) return std::nullopt;
    auto t = java_arg_type(*declared, file);
    if (!t) return std::nullopt;
    return Arg{name, *t, *declared + " " + name};
  };

  std::vector<Arg> base_args;
  for (const auto& name : df.arg_order) {
    const auto* v = df.find(name);
    if (java && (v->declared_top || v->declared_nested)) {
      drop(&SynthStats::synthesis_errors, "synthesis error: '" + name + "' read before assignment");
      return res;
    }
    auto a = arg_of(name);
    if (!a) {
      drop(&SynthStats::unsupported_type, "unsupported argument type for '" + name + "'");
      return res;
    }
    base_args.push_back(std::move(*a));
  }

  // Body text: the snippet, minus a trailing `return expr` which becomes the result.
  Span body_span = snippet.window.span;
  std::vector<Candidate> candidates;
  if (df.trailing_return) {
    body_span.end = stmts.back().span.begin;
    const std::string expr = rewritten(file, df.trailing_return->span, df.rewrites);
    const std::string name(file.slice(df.trailing_return->span));
    if (java) {
      for (const auto& leaf : java_return_leaves(fn.return_type, file)) {
        candidates.push_back({name + leaf.path, leaf.path.empty() ? expr : "(" + expr + ")" + leaf.path, leaf.type,
                              leaf.declared, {}});
      }
    } else {
      candidates.push_back({name, expr, python_return_type(stmts, *py_types), "", {}});
    }
  } else {
    for (const auto& name : df.def_order) {
      const auto* v = df.find(name);
      if (!(java ? java_return_candidate(*v) : python_return_candidate(*v))) continue;
      const bool definite = df.definite_at_end.count(name) > 0;
      std::vector<std::string> extra;
      if (!definite && !v->upward_exposed) {
        if (java && v->declared_top) continue;
        extra.push_back(name);
      }
      if (!java) {
        candidates.push_back({name, name, py_types->of(name), "", extra});
        continue;
      }
      const std::optional<std::string> declared = v->declared_type ? v->declared_type : scope->declared_type(name);
      if (!declared) continue;
      for (const auto& leaf : java_return_leaves(*declared, file)) {
        candidates.push_back({name + leaf.path, name + leaf.path, leaf.type, leaf.declared, extra});
      }
    }
  }
  if (candidates.empty()) {
    drop(&SynthStats::no_return, "no return candidate");
    return res;
  }

  std::string body = rtrim(rewritten(file, body_span, df.rewrites));
  const std::string package = java ? java_package(file) : std::string();
  const std::string preamble = java ? java_preamble(file, package) : python_preamble(file);
  const std::string indent = java ? std::string() : line_indent(file.text, snippet.window.span.begin);

  for (const auto& c : candidates) {
    std::vector<Arg> args = base_args;
    bool supported = true;
    for (const auto& name : c.extra_args) {
      auto a = arg_of(name);
      if (!a) {
        supported = false;
        break;
      }
      args.push_back(std::move(*a));
    }
    if (!supported) {
      drop(&SynthStats::unsupported_type, "unsupported argument type for return '" + c.name + "'");
      continue;
    }
    if (args.empty()) {
      drop(&SynthStats::zero_args, "no arguments for return '" + c.name + "'");
      continue;
    }
    if (static_cast<int>(args.size()) > cfg.args_max) {
      drop(&SynthStats::too_many_args, std::to_string(args.size()) + " arguments for return '" + c.name + "'");
      continue;
    }
    auto tmpl = std::make_shared<SourceTemplate>();
    tmpl->language = file.language.name;
    tmpl->preamble = preamble;
    tmpl->package = package;
    tmpl->indent = indent;
    tmpl->body = body;
    tmpl->result = c.result;
    tmpl->ret_decl = c.declared;
    for (const auto& a : args) tmpl->params.push_back(a.decl);
    if (java) {
      for (const auto& v : df.vars) {
        if (!v.modified || v.declared_top || v.declared_nested) continue;
        if (std::any_of(args.begin(), args.end(), [&](const Arg& a) { return a.name == v.name; })) continue;
        auto declared = scope->declared_type(v.name);
        if (!declared) continue;
        tmpl->prologue += "        " + *declared + " " + v.name + " = " + java_default_value(*declared) + ";\n";
      }
    }

    SynthesizedFunction f;
    f.base_id = ids.assign(origin + "|" + c.name);
    f.id = f.base_id;
    f.origin = origin;
    f.language = file.language;
    f.file = file.path;
    f.span = snippet.window.span;
    f.parent_function = fn.qualified_name;
    f.whole_method = snippet.whole_method();
    f.depth = snippet.window.depth;
    f.provenance = snippet.provenance;
    for (const auto& a : args) {
      f.signature.args.push_back(a.type);
      f.arg_names.push_back(a.name);
    }
    f.signature.ret = c.type;
    f.return_var = c.name;
    f.permutation.resize(args.size());
    std::iota(f.permutation.begin(), f.permutation.end(), std::size_t{0});
    f.entry = tmpl->entry(f.id);
    if (java) f.context_files.push_back(file.path);
    f.source = tmpl;
    f.source_text = tmpl->render(f.id, f.permutation);
    ++res.stats.base_functions;

    if (cfg.permute) {
      for (auto& v : permute_arguments(f)) res.functions.push_back(std::move(v));
    } else {
      res.functions.push_back(std::move(f));
    }
  }
  res.stats.functions = res.functions.size();
  return res;
}

std::vector<SynthesizedFunction> permute_arguments(const SynthesizedFunction& base) {
  std::vector<SynthesizedFunction> out;
  std::vector<std::size_t> order(base.arg_names.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::size_t k = 0;
  do {
    SynthesizedFunction v = base;
    v.id = k == 0 ? base.base_id : base.base_id + "_p" + std::to_string(k);
    v.permutation.clear();
    v.arg_names.clear();
    v.signature.args.clear();
    for (std::size_t idx : order) {
      // compose with the base's own permutation so variants of variants stay
      // expressed over the original argument order
      v.permutation.push_back(base.permutation.at(idx));
      v.arg_names.push_back(base.arg_names[idx]);
      v.signature.args.push_back(base.signature.args[idx]);
    }
    if (base.source) {
      v.source_text = base.source->render(v.id, v.permutation);
      v.entry = base.source->entry(v.id);
    }
    out.push_back(std::move(v));
    ++k;
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

nlohmann::json manifest_entry(const SynthesizedFunction& fn, const NumericBounds& bounds) {
  nlohmann::json j;
  j["id"] = fn.id;
  j["base_id"] = fn.base_id;
  j["origin"] = fn.origin;
  j["language"] = std::string(fn.language.token());
  j["file"] = fn.file;
  j["span"] = {fn.span.begin, fn.span.end};
  j["function"] = fn.parent_function;
  j["whole_method"] = fn.whole_method;
  j["depth"] = fn.depth;
  j["signature"] = canonical_signature(fn.signature);
  j["pool_key"] = pool_key(fn.signature, bounds);
  j["arg_names"] = fn.arg_names;
  j["return_var"] = fn.return_var;
  j["permutation"] = fn.permutation;
  j["source_path"] = fn.source_path;
  j["entry"] = fn.entry;
  j["context_files"] = fn.context_files;
  j["problem"] = fn.provenance.problem;
  j["author"] = fn.provenance.author;
  return j;
}

SynthesizedFunction manifest_function(const nlohmann::json& j) {
  try {
    SynthesizedFunction f;
    f.id = j.at("id").get<std::string>();
    f.base_id = j.at("base_id").get<std::string>();
    f.origin = j.at("origin").get<std::string>();
    auto lang = language_from_name(j.at("language").get<std::string>());
    if (!lang) throw Error(ErrorCode::load, "unknown language in manifest: " + j.at("language").dump());
    f.language = *lang;
    f.file = j.at("file").get<std::string>();
    f.span = {j.at("span").at(0).get<std::uint32_t>(), j.at("span").at(1).get<std::uint32_t>()};
    f.parent_function = j.at("function").get<std::string>();
    f.whole_method = j.at("whole_method").get<bool>();
    f.depth = j.value("depth", 0);
    f.signature = parse_canonical_signature(j.at("signature").get<std::string>());
    f.arg_names = j.at("arg_names").get<std::vector<std::string>>();
    f.return_var = j.at("return_var").get<std::string>();
    f.permutation = j.at("permutation").get<std::vector<std::size_t>>();
    f.source_path = j.at("source_path").get<std::string>();
    f.entry = j.at("entry").get<std::string>();
    f.context_files = j.at("context_files").get<std::vector<std::string>>();
    f.provenance.problem = j.value("problem", "");
    f.provenance.author = j.value("author", "");
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::load, std::string("malformed manifest entry: ") + e.what());
  }
}

void write_work(const std::filesystem::path& run_dir, std::vector<SynthesizedFunction>& functions,
                const NumericBounds& bounds) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(run_dir / "work", ec);
  if (ec) throw Error(ErrorCode::io, "cannot create " + (run_dir / "work").string() + ": " + ec.message());
  std::ofstream manifest(run_dir / "work" / "manifest.jsonl", std::ios::binary | std::ios::trunc);
  if (!manifest) throw Error(ErrorCode::io, "cannot write manifest under " + run_dir.string());
  for (auto& f : functions) {
    const fs::path rel = fs::path("work") / std::string(f.language.token()) /
                         (f.id + "." + std::string(f.language.extension()));
    fs::create_directories((run_dir / rel).parent_path(), ec);
    std::ofstream out(run_dir / rel, std::ios::binary | std::ios::trunc);
    out << f.source_text;
    if (!out) throw Error(ErrorCode::io, "cannot write " + (run_dir / rel).string());
    f.source_path = rel.generic_string();
    manifest << manifest_entry(f, bounds).dump() << "\n";
  }
  if (!manifest) throw Error(ErrorCode::io, "cannot write manifest under " + run_dir.string());
}

std::vector<SynthesizedFunction> read_manifest(const std::filesystem::path& run_dir) {
  const auto path = run_dir / "work" / "manifest.jsonl";
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::missing_artifacts, "missing " + path.string());
  std::vector<SynthesizedFunction> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::load, path.string() + ": " + e.what());
    }
    out.push_back(manifest_function(j));
  }
  return out;
}

}  // namespace simclone::synth
