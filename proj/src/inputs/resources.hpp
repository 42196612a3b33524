#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "inputs/constants.hpp"

namespace simclone::inputs {

// File contents handed to functions taking file arguments. Workers write the
// content of a FileRef to a temporary file for the duration of one call.
class FileResourcePool {
 public:
  static constexpr std::size_t kDefaultSize = 32;

  static FileResourcePool from_bank(const ConstantBank& bank, std::uint64_t seed, std::size_t count = kDefaultSize);
  // Byte-level mutants (insert / delete / replace of 1-5% of the bytes).
  static FileResourcePool from_seed_file(const std::string& content, std::uint64_t seed,
                                         std::size_t count = kDefaultSize);

  [[nodiscard]] const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  [[nodiscard]] const std::string* find(const std::string& id) const;
  [[nodiscard]] const std::string& provenance() const { return provenance_; }

  void save(const std::filesystem::path& path) const;
  static FileResourcePool load(const std::filesystem::path& path);

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
  std::string provenance_;
};

}  // namespace simclone::inputs
