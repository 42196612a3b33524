#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cluster/report.hpp"
#include "cluster/similarity.hpp"

namespace simclone::validate {

// Runs one function on its fresh validation pool; nullopt when it no longer loads.
using Reexecute = std::function<std::optional<IOProfile>(const std::string& function_id)>;

struct Verdict {
  std::string cluster;
  Validity validity = Validity::unvalidated;
  std::vector<std::vector<std::string>> regrouped;  // members' partition on the fresh pools
};

struct ValidationReport {
  std::vector<Verdict> verdicts;
  cluster::ValidationSummary summary;
};

// Re-executes every member, re-partitions the members alone with the same
// similarity settings, and marks the cluster false_positive unless they all
// stay together.
Verdict validate_cluster(const cluster::ClusterRecord& record, const Reexecute& rerun,
                         const cluster::SimilarityConfig& cfg);

ValidationReport validate_clusters(std::vector<cluster::ClusterRecord>& records, const Reexecute& rerun,
                                   const cluster::SimilarityConfig& cfg, int workers = 1);

cluster::ValidationSummary summarize(const std::vector<cluster::ClusterRecord>& records);

}  // namespace simclone::validate
