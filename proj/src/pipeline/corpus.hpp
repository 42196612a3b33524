#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "lang/ast.hpp"
#include "segment/segmenter.hpp"

namespace simclone::pipeline {

struct CorpusFile {
  std::filesystem::path path;
  std::string display;  // "<root name>/<relative path>", used in origins
  LanguageId language;
  segment::Provenance provenance;
};

// Source files under the given roots whose language is requested, sorted by
// display path. `<problem>/<author>/<file>` layouts below a root fill in the
// provenance. Throws Error(config) for a missing root.
std::vector<CorpusFile> collect_corpus(const std::vector<std::string>& roots, const std::vector<LanguageId>& languages);

struct ParsedCorpus {
  std::vector<std::shared_ptr<const lang::ParsedFile>> files;
  std::vector<segment::Provenance> provenance;  // index-aligned with files
  std::vector<std::string> errors;              // "<display>: <message>"
};

ParsedCorpus parse_corpus(const std::vector<CorpusFile>& files);

}  // namespace simclone::pipeline
