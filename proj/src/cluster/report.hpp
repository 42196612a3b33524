#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "model/value.hpp"

namespace simclone::cluster {

inline constexpr int kReportSchema = 1;

struct MemberInfo {
  std::string id;
  std::string language;  // "python", "java", or "unknown" for imported pairs
  std::string origin;    // "<file>:<begin>-<end>"
  bool whole_method = false;
};

struct ClusterRecord {
  std::string id;      // "c0001", ...
  std::string method;  // "io", "ast-type3" or "imported"
  double sim_t = 1.0;
  std::string representative;
  std::vector<MemberInfo> members;
  Validity validity = Validity::unvalidated;

  [[nodiscard]] bool cross_language() const;
};

struct ValidationSummary {
  std::size_t clusters = 0;
  std::size_t valid = 0;
  std::size_t false_positives = 0;
  std::size_t clones = 0;
  double precision = 0.0;  // valid / clusters, 0 when nothing was reported
  std::uint64_t seed = 0;
  std::size_t inputs = 0;
};

using MemberTable = std::map<std::string, MemberInfo>;

// Turns raw clusters into report records: members sharing an origin are
// collapsed to their first mention, clusters left with fewer than two
// distinct origins are dropped, and ids are assigned in order.
std::vector<ClusterRecord> build_records(const std::vector<CloneCluster>& clusters, const MemberTable& members,
                                         const std::string& method);

nlohmann::json record_to_json(const ClusterRecord& r);
ClusterRecord record_from_json(const nlohmann::json& j);
nlohmann::json summary_to_json(const ValidationSummary& s);

void write_records(const std::filesystem::path& path, const std::vector<ClusterRecord>& records,
                   const std::optional<ValidationSummary>& summary = std::nullopt);
// Cluster records of a report file; the trailing validation summary, if
// present, is returned separately.
std::pair<std::vector<ClusterRecord>, std::optional<ValidationSummary>> read_records(
    const std::filesystem::path& path);

// Human-readable listing, cross-language clusters first.
std::string render_digest(const std::vector<ClusterRecord>& records, const nlohmann::json& stats,
                          const std::optional<ValidationSummary>& summary = std::nullopt);

// Table row: clusters / clones / valid / false positives / precision.
std::string summary_row(const ValidationSummary& s);

// Groups pairs sharing a function into clusters (connected components),
// ordered by first appearance.
std::vector<CloneCluster> group_pairs(const std::vector<std::pair<std::string, std::string>>& pairs);
std::vector<std::pair<std::string, std::string>> parse_pairs(std::istream& in);

}  // namespace simclone::cluster
