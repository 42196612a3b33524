#pragma once

#include <span>
#include <vector>

#include "model/types.hpp"
#include "model/value.hpp"

namespace simclone::cluster {

struct SimilarityConfig {
  double sim_t = 1.0;
  double real_tolerance = 1e-6;  // relative
  double abs_tolerance = 1e-9;   // floor used near zero
  bool exception_match = false;
};

bool values_equal(const Value& a, const Value& b, const SimilarityConfig& cfg = {});
bool outputs_equal(const Outcome& a, const Outcome& b, const SimilarityConfig& cfg = {});

// Fraction of aligned records whose outputs are equal. Throws
// Error(pool_mismatch) when the profiles were not run on the same pool.
double similarity(const IOProfile& p, const IOProfile& q, const SimilarityConfig& cfg = {});

bool comparable(const Signature& a, const Signature& b);

// Representative-based partitioning over profiles in the given order. Every
// profile lands in exactly one group; the first member of a group is its
// representative. Profiles are only scored against representatives sharing
// their pool and a comparable signature.
std::vector<CloneCluster> partition(std::span<const IOProfile* const> profiles, const SimilarityConfig& cfg = {});

// partition() restricted to groups with at least two members.
std::vector<CloneCluster> find_clusters(std::span<const IOProfile* const> profiles, const SimilarityConfig& cfg = {});

}  // namespace simclone::cluster
