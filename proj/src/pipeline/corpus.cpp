#include "pipeline/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "model/error.hpp"

namespace simclone::pipeline {

namespace fs = std::filesystem;

std::vector<CorpusFile> collect_corpus(const std::vector<std::string>& roots, const std::vector<LanguageId>& languages) {
  std::vector<CorpusFile> out;
  auto wanted = [&](const fs::path& p) -> std::optional<LanguageId> {
    auto lang = language_from_path(p.string());
    if (!lang) return std::nullopt;
    if (!languages.empty() && std::find(languages.begin(), languages.end(), *lang) == languages.end()) {
      return std::nullopt;
    }
    return lang;
  };
  for (const auto& r : roots) {
    const fs::path root(r);
    std::error_code ec;
    if (fs::is_regular_file(root, ec)) {
      if (auto lang = wanted(root)) out.push_back({root, root.filename().generic_string(), *lang, {}});
      continue;
    }
    if (!fs::is_directory(root, ec)) throw Error(ErrorCode::config, "corpus path does not exist: " + r);
    const fs::path base = root.has_filename() ? root : root.parent_path();
    const std::string prefix = base.filename().generic_string();
    for (fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec), end;
         it != end; it.increment(ec)) {
      if (ec) break;
      if (!it->is_regular_file(ec)) continue;
      auto lang = wanted(it->path());
      if (!lang) continue;
      const fs::path rel = fs::relative(it->path(), root, ec);
      CorpusFile f{it->path(), prefix + "/" + rel.generic_string(), *lang, {}};
      std::vector<std::string> parts;
      for (const auto& p : rel) parts.push_back(p.string());
      if (parts.size() >= 3) f.provenance = {parts[0], parts[1]};
      out.push_back(std::move(f));
    }
  }
  std::sort(out.begin(), out.end(), [](const CorpusFile& a, const CorpusFile& b) { return a.display < b.display; });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const CorpusFile& a, const CorpusFile& b) { return a.display == b.display; }),
            out.end());
  return out;
}

ParsedCorpus parse_corpus(const std::vector<CorpusFile>& files) {
  ParsedCorpus pc;
  for (const auto& f : files) {
    std::ifstream in(f.path, std::ios::binary);
    if (!in) {
      pc.errors.push_back(f.display + ": cannot read");
      continue;
    }
    std::ostringstream text;
    text << in.rdbuf();
    try {
      pc.files.push_back(std::make_shared<const lang::ParsedFile>(lang::parse_source(text.str(), f.language, f.display)));
      pc.provenance.push_back(f.provenance);
    } catch (const Error& e) {
      pc.errors.push_back(f.display + ": " + e.what());
    }
  }
  return pc;
}

}  // namespace simclone::pipeline
