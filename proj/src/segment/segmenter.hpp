#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lang/ast.hpp"

namespace simclone::segment {

// A window of consecutive sibling statements at one nesting level.
struct Window {
  const std::vector<lang::Statement>* siblings = nullptr;
  std::size_t first = 0;
  std::size_t count = 0;
  int depth = 0;
  lang::Span span;
};

// Sliding-window segmentation of one statement list, recursing into every
// statement that owns nested bodies. Output follows traversal order and is
// de-duplicated by span.
std::vector<Window> segment(const std::vector<lang::Statement>& body, int min_stmt);

// (problem, author) for corpora laid out as <problem>/<author>/<file>.
struct Provenance {
  std::string problem;
  std::string author;
};

struct Snippet {
  std::shared_ptr<const lang::ParsedFile> file;
  const lang::FunctionInfo* function = nullptr;
  Window window;
  Provenance provenance;

  [[nodiscard]] std::span<const lang::Statement> statements() const {
    return std::span<const lang::Statement>(*window.siblings).subspan(window.first, window.count);
  }
  [[nodiscard]] std::string_view text() const { return file->slice(window.span); }
  [[nodiscard]] const LanguageId& language() const { return file->language; }
  [[nodiscard]] bool whole_method() const {
    return window.depth == 0 && window.first == 0 && window.count == window.siblings->size();
  }
  // "<file>:<begin>-<end>"
  [[nodiscard]] std::string origin() const;
};

std::vector<Snippet> segment_file(const std::shared_ptr<const lang::ParsedFile>& file, int min_stmt,
                                  const Provenance& provenance = {});

struct CorpusFile {
  std::filesystem::path path;
  LanguageId language;
  Provenance provenance;
};

// Source files under `root` (a directory or a single file), sorted by path.
// When `only` is set, other languages are ignored.
std::vector<CorpusFile> walk_corpus(const std::filesystem::path& root, std::optional<LanguageId> only = std::nullopt);

struct LoadedFile {
  std::shared_ptr<const lang::ParsedFile> parsed;
  Provenance provenance;
};

struct LoadedCorpus {
  std::vector<LoadedFile> files;
  std::vector<std::string> skipped;  // "path: reason" for files that failed to parse
};

LoadedCorpus load_corpus(const std::vector<CorpusFile>& files);

}  // namespace simclone::segment
