#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "lang/ast.hpp"
#include "model/types.hpp"
#include "segment/segmenter.hpp"
#include "synth/dataflow.hpp"

namespace simclone::synth {

struct SynthConfig {
  int args_max = 5;
  bool permute = true;
};

// Function text split so argument-order variants can be rendered without
// re-running the analysis.
struct SourceTemplate {
  Lang language = Lang::python;
  std::string preamble;             // package, imports, replicated module context
  std::vector<std::string> params;  // parameter declarations in base order
  std::string ret_decl;             // Java return type
  std::string prologue;             // Java declarations of outer locals
  std::string body;                 // snippet text with rewrites applied
  std::string indent;               // Python body indentation
  std::string result;               // returned expression
  std::string package;              // Java package of the origin file

  // Loadable name of the function rendered under `id`.
  [[nodiscard]] std::string entry(const std::string& id) const;

  [[nodiscard]] std::string render(const std::string& entry, const std::vector<std::size_t>& order) const;
};

struct SynthesizedFunction {
  std::string id;
  std::string base_id;  // shared by all argument-order variants
  std::string origin;   // "<file>:<begin>-<end>"
  LanguageId language;
  std::string file;
  lang::Span span;
  std::string parent_function;
  bool whole_method = false;
  int depth = 0;
  segment::Provenance provenance;
  Signature signature;
  std::vector<std::string> arg_names;
  std::string return_var;  // variable name plus member path for expanded objects
  std::vector<std::size_t> permutation;  // permutation[k] = base index of argument k
  std::string entry;       // loadable name: function (Python) or Class.method (Java)
  std::string source_text;
  std::string source_path;  // relative to the run directory once written
  std::vector<std::string> context_files;
  std::shared_ptr<const SourceTemplate> source;
};

// Collision-checked short ids derived from a stable key.
class IdRegistry {
 public:
  std::string assign(const std::string& key);

 private:
  std::mutex mu_;
  std::map<std::string, std::string> owner_;  // id -> key
};

struct SynthStats {
  std::size_t snippets = 0;
  std::size_t synthesis_errors = 0;
  std::size_t no_return = 0;
  std::size_t unsupported_type = 0;
  std::size_t too_many_args = 0;
  std::size_t zero_args = 0;
  std::size_t base_functions = 0;
  std::size_t functions = 0;  // including permutation variants

  SynthStats& operator+=(const SynthStats& o);
};

struct SynthResult {
  std::vector<SynthesizedFunction> functions;
  SynthStats stats;
  std::vector<std::string> log;
};

// Argument and return variables of a snippet as seen by the synthesizer.
struct IoVariables {
  std::vector<std::string> args;
  std::vector<std::string> returns;
  std::vector<std::string> errors;
};

NameResolver make_resolver(const lang::ParsedFile& file, const lang::FunctionInfo& fn);
IoVariables infer_io_variables(const segment::Snippet& snippet);

SynthResult synthesize(const segment::Snippet& snippet, const SynthConfig& cfg, IdRegistry& ids);

// Variants for every ordering of the arguments, identity first.
std::vector<SynthesizedFunction> permute_arguments(const SynthesizedFunction& base);

// Writes work/<lang>/<id>.<ext> for each function (filling source_path) and
// work/manifest.jsonl.
void write_work(const std::filesystem::path& run_dir, std::vector<SynthesizedFunction>& functions,
                const NumericBounds& bounds);

nlohmann::json manifest_entry(const SynthesizedFunction& fn, const NumericBounds& bounds);
SynthesizedFunction manifest_function(const nlohmann::json& j);
std::vector<SynthesizedFunction> read_manifest(const std::filesystem::path& run_dir);

}  // namespace simclone::synth
