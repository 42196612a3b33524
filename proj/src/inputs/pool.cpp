#include "inputs/pool.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "model/error.hpp"

namespace simclone::inputs {

namespace {

constexpr int kFormatVersion = 1;
constexpr std::uint64_t kFuzzNamespace = 0x46555a5a504f4f4cULL;

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

const char* kind_name(PoolKind k) { return k == PoolKind::base ? "base" : "fuzz"; }

std::uint64_t pool_seed(const std::string& key, std::uint64_t seed, PoolKind kind) {
  std::uint64_t s = splitmix64(seed ^ fnv1a64(key));
  if (kind == PoolKind::fuzz) s = splitmix64(s ^ kFuzzNamespace);
  return s;
}

}  // namespace

std::string pool_checksum(const std::vector<Tuple>& tuples) {
  std::uint64_t h = 14695981039346656037ULL;
  for (const auto& t : tuples) {
    for (unsigned char c : encode_tuple(t) + "\n") {
      h ^= c;
      h *= 1099511628211ULL;
    }
  }
  return hex64(h);
}

std::string serialize_pool(const InputPool& pool) {
  nlohmann::json header;
  header["format"] = kFormatVersion;
  header["kind"] = kind_name(pool.kind);
  header["key"] = pool.key;
  header["seed"] = pool.seed;
  header["n"] = pool.tuples.size();
  header["checksum"] = pool.checksum;
  std::string out = header.dump() + "\n";
  for (const auto& t : pool.tuples) out += encode_tuple(t) + "\n";
  return out;
}

InputPool parse_pool(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::checksum, origin + ": empty pool file");
  InputPool pool;
  std::size_t n = 0;
  try {
    const auto header = nlohmann::json::parse(line);
    if (header.at("format").get<int>() != kFormatVersion) {
      throw Error(ErrorCode::load, origin + ": unsupported pool format");
    }
    pool.key = header.at("key").get<std::string>();
    pool.kind = header.at("kind").get<std::string>() == "fuzz" ? PoolKind::fuzz : PoolKind::base;
    pool.seed = header.at("seed").get<std::uint64_t>();
    pool.checksum = header.at("checksum").get<std::string>();
    n = header.at("n").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::checksum, origin + ": corrupt pool header: " + e.what());
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      pool.tuples.push_back(tuple_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      throw Error(ErrorCode::checksum, origin + ": corrupt pool tuple: " + e.what());
    }
  }
  if (pool.tuples.size() != n || pool_checksum(pool.tuples) != pool.checksum) {
    throw Error(ErrorCode::checksum, origin + ": pool checksum mismatch");
  }
  return pool;
}

InputPool materialize_pool(const std::string& key, std::size_t n, std::uint64_t seed, const Sampler& sampler,
                           PoolKind kind) {
  if (n == 0) throw Error(ErrorCode::invalid_argument, "input pools need at least one tuple");
  const Signature sig = parse_canonical_signature(key);
  InputPool pool;
  pool.key = key;
  pool.kind = kind;
  pool.seed = seed;
  Rng rng(pool_seed(key, seed, kind));
  pool.tuples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Tuple t;
    t.reserve(sig.args.size());
    for (const auto& a : sig.args) t.push_back(sampler.sample(a, rng));
    pool.tuples.push_back(std::move(t));
  }
  pool.checksum = pool_checksum(pool.tuples);
  return pool;
}

PoolStore::PoolStore(std::filesystem::path dir, std::shared_ptr<const Sampler> base,
                     std::shared_ptr<const Sampler> fuzz, NumericBounds bounds)
    : dir_(std::move(dir)), base_(std::move(base)), fuzz_(std::move(fuzz)), bounds_(bounds) {}

std::filesystem::path PoolStore::path_for(const std::string& key, std::size_t n, std::uint64_t seed,
                                          PoolKind kind) const {
  std::string name = hex64(fnv1a64(key)) + "-n" + std::to_string(n) + "-s" + std::to_string(seed);
  name += kind == PoolKind::fuzz ? ".fuzz.pool" : ".pool";
  return dir_ / name;
}

std::shared_ptr<const InputPool> PoolStore::get_pool(const Signature& sig, std::size_t n, std::uint64_t seed) {
  return get_pool(pool_key(sig, bounds_), n, seed);
}

std::shared_ptr<const InputPool> PoolStore::get_pool(const std::string& key, std::size_t n, std::uint64_t seed) {
  return obtain(key, n, seed, PoolKind::base);
}

std::shared_ptr<const InputPool> PoolStore::fuzz_pool(const Signature& sig, std::size_t n, std::uint64_t seed) {
  return fuzz_pool(pool_key(sig, bounds_), n, seed);
}

std::shared_ptr<const InputPool> PoolStore::fuzz_pool(const std::string& key, std::size_t n, std::uint64_t seed) {
  if (!base_exists(key)) throw Error(ErrorCode::missing_artifacts, "no base pool for " + key);
  return obtain(key, n, seed, PoolKind::fuzz);
}

bool PoolStore::base_exists(const std::string& key) {
  {
    std::lock_guard lock(mu_);
    if (base_keys_.count(key)) return true;
  }
  const std::string prefix = hex64(fnv1a64(key)) + "-";
  std::error_code ec;
  for (const auto& e : std::filesystem::directory_iterator(dir_, ec)) {
    const std::string name = e.path().filename().string();
    if (!name.starts_with(prefix) || name.ends_with(".fuzz.pool")) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::string header;
    if (!std::getline(in, header)) continue;
    try {
      if (nlohmann::json::parse(header).at("key").get<std::string>() == key) {
        std::lock_guard lock(mu_);
        base_keys_.insert(key);
        return true;
      }
    } catch (const nlohmann::json::exception&) {
    }
  }
  return false;
}

std::shared_ptr<const InputPool> PoolStore::obtain(const std::string& key, std::size_t n, std::uint64_t seed,
                                                   PoolKind kind) {
  if (n == 0) throw Error(ErrorCode::invalid_argument, "input pools need at least one tuple");
  const std::string memo = std::string(kind_name(kind)) + "|" + std::to_string(n) + "|" + std::to_string(seed) + "|" + key;
  std::shared_ptr<std::mutex> key_lock;
  {
    std::lock_guard lock(mu_);
    if (auto it = cache_.find(memo); it != cache_.end()) return it->second;
    auto& slot = key_locks_[memo];
    if (!slot) slot = std::make_shared<std::mutex>();
    key_lock = slot;
  }
  std::lock_guard materialize(*key_lock);
  {
    std::lock_guard lock(mu_);
    if (auto it = cache_.find(memo); it != cache_.end()) return it->second;
  }
  const auto path = path_for(key, n, seed, kind);
  std::shared_ptr<const InputPool> pool;
  std::error_code ec;
  if (std::filesystem::exists(path, ec)) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    auto loaded = parse_pool(buf.str(), path.string());
    if (loaded.key != key) throw Error(ErrorCode::checksum, path.string() + ": pool key mismatch");
    pool = std::make_shared<const InputPool>(std::move(loaded));
  } else {
    const Sampler& sampler = kind == PoolKind::fuzz ? *fuzz_ : *base_;
    auto fresh = materialize_pool(key, n, seed, sampler, kind);
    std::filesystem::create_directories(dir_, ec);
    const auto tmp = path.string() + ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << serialize_pool(fresh);
      if (!out) throw Error(ErrorCode::store, "cannot write pool file " + tmp);
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error(ErrorCode::store, "cannot persist pool file " + path.string() + ": " + ec.message());
    ++writes_;
    pool = std::make_shared<const InputPool>(std::move(fresh));
  }
  std::lock_guard lock(mu_);
  if (kind == PoolKind::base) base_keys_.insert(key);
  cache_[memo] = pool;
  return pool;
}

}  // namespace simclone::inputs
