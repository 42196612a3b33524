#include "inputs/resources.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "inputs/rng.hpp"
#include "model/error.hpp"

namespace simclone::inputs {

namespace {

std::string resource_id(std::size_t k) { return "r" + std::to_string(k); }

char printable(Rng& rng) { return static_cast<char>(32 + rng.below(95)); }

template <typename Map>
const typename Map::key_type& weighted_pick(const Map& m, Rng& rng) {
  std::size_t total = 0;
  for (const auto& [k, c] : m) total += c;
  std::uint64_t r = rng.below(total);
  for (const auto& [k, c] : m) {
    if (r < c) return k;
    r -= c;
  }
  return m.begin()->first;
}

}  // namespace

FileResourcePool FileResourcePool::from_bank(const ConstantBank& bank, std::uint64_t seed, std::size_t count) {
  FileResourcePool pool;
  pool.provenance_ = "constant-sampled";
  Rng rng(splitmix64(seed ^ 0x5245534f55524345ULL));
  for (std::size_t k = 0; k < count; ++k) {
    std::string content;
    const std::size_t lines = 1 + rng.below(8);
    for (std::size_t l = 0; l < lines; ++l) {
      if (!bank.ints.empty() && rng.coin()) {
        const std::size_t per_line = 1 + rng.below(4);
        for (std::size_t t = 0; t < per_line; ++t) {
          if (t) content += ' ';
          content += std::to_string(weighted_pick(bank.ints, rng));
        }
      } else if (!bank.strings.empty()) {
        content += weighted_pick(bank.strings, rng);
      }
      content += '\n';
    }
    pool.entries_.emplace_back(resource_id(k), std::move(content));
  }
  return pool;
}

FileResourcePool FileResourcePool::from_seed_file(const std::string& content, std::uint64_t seed, std::size_t count) {
  FileResourcePool pool;
  pool.provenance_ = "seeded-mutation";
  Rng rng(splitmix64(seed ^ 0x4d5554414e545321ULL));
  for (std::size_t k = 0; k < count; ++k) {
    std::string m = content;
    const double rate = 0.01 + 0.04 * rng.unit();
    const std::size_t edits = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(rate * content.size())));
    for (std::size_t e = 0; e < edits; ++e) {
      const auto op = rng.below(3);
      if (op == 0 || m.empty()) {
        m.insert(m.begin() + static_cast<std::ptrdiff_t>(rng.below(m.size() + 1)), printable(rng));
      } else if (op == 1) {
        m.erase(m.begin() + static_cast<std::ptrdiff_t>(rng.below(m.size())));
      } else {
        m[rng.below(m.size())] = printable(rng);
      }
    }
    pool.entries_.emplace_back(resource_id(k), std::move(m));
  }
  return pool;
}

const std::string* FileResourcePool::find(const std::string& id) const {
  for (const auto& [k, v] : entries_) {
    if (k == id) return &v;
  }
  return nullptr;
}

void FileResourcePool::save(const std::filesystem::path& path) const {
  nlohmann::json j;
  j["provenance"] = provenance_;
  j["entries"] = nlohmann::json::array();
  for (const auto& [id, content] : entries_) j["entries"].push_back({{"id", id}, {"content", content}});
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << j.dump(1) << "\n";
  if (!out) throw Error(ErrorCode::store, "cannot write " + path.string());
}

FileResourcePool FileResourcePool::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::missing_artifacts, "missing " + path.string());
  try {
    const auto j = nlohmann::json::parse(in);
    FileResourcePool pool;
    pool.provenance_ = j.at("provenance").get<std::string>();
    for (const auto& e : j.at("entries")) {
      pool.entries_.emplace_back(e.at("id").get<std::string>(), e.at("content").get<std::string>());
    }
    return pool;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::load, path.string() + ": " + e.what());
  }
}

}  // namespace simclone::inputs
