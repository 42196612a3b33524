#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "inputs/sampler.hpp"
#include "model/types.hpp"
#include "model/value.hpp"

namespace simclone::inputs {

enum class PoolKind { base, fuzz };

struct InputPool {
  std::string key;  // pool_key of the signature
  PoolKind kind = PoolKind::base;
  std::uint64_t seed = 0;
  std::vector<Tuple> tuples;
  std::string checksum;

  [[nodiscard]] std::size_t size() const { return tuples.size(); }
};

// Stable on-disk form: a JSON header line followed by one encoded tuple per line.
std::string serialize_pool(const InputPool& pool);
InputPool parse_pool(const std::string& text, const std::string& origin);
std::string pool_checksum(const std::vector<Tuple>& tuples);

// Generates `n` tuples for the argument descriptors encoded in `key`.
InputPool materialize_pool(const std::string& key, std::size_t n, std::uint64_t seed, const Sampler& sampler,
                           PoolKind kind);

// Memoized pools keyed by canonical signature, persisted under one directory.
class PoolStore {
 public:
  PoolStore(std::filesystem::path dir, std::shared_ptr<const Sampler> base, std::shared_ptr<const Sampler> fuzz,
            NumericBounds bounds);

  std::shared_ptr<const InputPool> get_pool(const Signature& sig, std::size_t n, std::uint64_t seed);
  std::shared_ptr<const InputPool> get_pool(const std::string& key, std::size_t n, std::uint64_t seed);
  // Fresh triangular pool; a base pool for the key must already exist.
  std::shared_ptr<const InputPool> fuzz_pool(const Signature& sig, std::size_t n, std::uint64_t seed);
  std::shared_ptr<const InputPool> fuzz_pool(const std::string& key, std::size_t n, std::uint64_t seed);

  [[nodiscard]] std::size_t write_count() const { return writes_.load(); }
  [[nodiscard]] const NumericBounds& bounds() const { return bounds_; }
  [[nodiscard]] std::filesystem::path path_for(const std::string& key, std::size_t n, std::uint64_t seed,
                                               PoolKind kind) const;

 private:
  std::filesystem::path dir_;
  std::shared_ptr<const Sampler> base_;
  std::shared_ptr<const Sampler> fuzz_;
  NumericBounds bounds_;
  std::mutex mu_;
  std::map<std::string, std::shared_ptr<std::mutex>> key_locks_;
  std::map<std::string, std::shared_ptr<const InputPool>> cache_;
  std::set<std::string> base_keys_;
  std::atomic<std::size_t> writes_{0};

  std::shared_ptr<const InputPool> obtain(const std::string& key, std::size_t n, std::uint64_t seed, PoolKind kind);
  bool base_exists(const std::string& key);
};

}  // namespace simclone::inputs
