#include "segment/segmenter.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "model/error.hpp"

namespace simclone::segment {

namespace {

void segment_level(const std::vector<lang::Statement>& stmts, int min_stmt, int depth, std::vector<Window>& out,
                   std::set<std::pair<std::uint32_t, std::uint32_t>>& seen) {
  const std::size_t n = stmts.size();
  auto emit = [&](std::size_t first, std::size_t count) {
    const lang::Span span{stmts[first].span.begin, stmts[first + count - 1].span.end};
    if (seen.insert({span.begin, span.end}).second) out.push_back({&stmts, first, count, depth, span});
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      if (static_cast<int>(j - i + 1) >= min_stmt) emit(i, j - i + 1);
      // nested levels are visited once, from the first pass
      if (i == 0 && stmts[j].has_children() && !stmts[j].nested_definition) {
        for (const auto& clause : stmts[j].clauses) segment_level(clause.body, min_stmt, depth + 1, out, seen);
      }
    }
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::vector<Window> segment(const std::vector<lang::Statement>& body, int min_stmt) {
  if (min_stmt < 1) throw Error(ErrorCode::invalid_argument, "min_stmt must be at least 1");
  std::vector<Window> out;
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  segment_level(body, min_stmt, 0, out, seen);
  return out;
}

std::string Snippet::origin() const {
  return file->path + ":" + std::to_string(window.span.begin) + "-" + std::to_string(window.span.end);
}

std::vector<Snippet> segment_file(const std::shared_ptr<const lang::ParsedFile>& file, int min_stmt,
                                  const Provenance& provenance) {
  std::vector<Snippet> out;
  for (const auto& fn : file->functions) {
    for (const auto& w : segment(fn.body, min_stmt)) out.push_back({file, &fn, w, provenance});
  }
  return out;
}

std::vector<CorpusFile> walk_corpus(const std::filesystem::path& root, std::optional<LanguageId> only) {
  namespace fs = std::filesystem;
  std::vector<CorpusFile> files;
  auto consider = [&](const fs::path& path, const fs::path& rel) {
    auto lang = language_from_path(path.string());
    if (!lang || (only && !(*only == *lang))) return;
    CorpusFile f{path, *lang, {}};
    std::vector<std::string> parts;
    for (const auto& p : rel) parts.push_back(p.string());
    if (parts.size() == 3) f.provenance = {parts[0], parts[1]};
    files.push_back(std::move(f));
  };
  std::error_code ec;
  if (fs::is_regular_file(root, ec)) {
    consider(root, root.filename());
  } else if (fs::is_directory(root, ec)) {
    for (auto it = fs::recursive_directory_iterator(root, fs::directory_options::skip_permission_denied, ec);
         it != fs::recursive_directory_iterator(); it.increment(ec)) {
      if (ec) break;
      if (it->is_regular_file()) consider(it->path(), fs::relative(it->path(), root));
    }
  } else {
    throw Error(ErrorCode::config, "corpus path does not exist: " + root.string());
  }
  std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) { return a.path < b.path; });
  return files;
}

LoadedCorpus load_corpus(const std::vector<CorpusFile>& files) {
  LoadedCorpus corpus;
  for (const auto& f : files) {
    try {
      auto parsed = std::make_shared<lang::ParsedFile>(lang::parse_source(read_file(f.path), f.language, f.path.string()));
      corpus.files.push_back({std::move(parsed), f.provenance});
    } catch (const Error& e) {
      corpus.skipped.push_back(f.path.string() + ": " + e.what());
    }
  }
  return corpus;
}

}  // namespace simclone::segment
