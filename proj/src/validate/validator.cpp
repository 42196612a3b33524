#include "validate/validator.hpp"

#include <atomic>
#include <thread>

namespace simclone::validate {

Verdict validate_cluster(const cluster::ClusterRecord& record, const Reexecute& rerun,
                         const cluster::SimilarityConfig& cfg) {
  Verdict v;
  v.cluster = record.id;
  std::vector<IOProfile> fresh;
  fresh.reserve(record.members.size());
  bool lost = false;
  // representative first, then the remaining members in report order
  std::vector<std::string> order = {record.representative};
  for (const auto& m : record.members) {
    if (m.id != record.representative) order.push_back(m.id);
  }
  for (const auto& id : order) {
    auto p = rerun(id);
    if (!p) {
      lost = true;
      v.regrouped.push_back({id});
      continue;
    }
    fresh.push_back(std::move(*p));
  }
  std::vector<const IOProfile*> ptrs;
  for (const auto& p : fresh) ptrs.push_back(&p);
  auto scored = cfg;
  scored.sim_t = record.sim_t;
  for (auto& g : cluster::partition(ptrs, scored)) v.regrouped.push_back(std::move(g.members));
  v.validity = !lost && v.regrouped.size() == 1 ? Validity::valid : Validity::false_positive;
  return v;
}

ValidationReport validate_clusters(std::vector<cluster::ClusterRecord>& records, const Reexecute& rerun,
                                   const cluster::SimilarityConfig& cfg, int workers) {
  ValidationReport report;
  report.verdicts.resize(records.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < records.size(); k = next++) {
      report.verdicts[k] = validate_cluster(records[k], rerun, cfg);
    }
  };
  std::vector<std::thread> threads;
  for (int t = 1; t < std::min<int>(workers, static_cast<int>(records.size())); ++t) threads.emplace_back(work);
  work();
  for (auto& t : threads) t.join();
  for (std::size_t k = 0; k < records.size(); ++k) records[k].validity = report.verdicts[k].validity;
  report.summary = summarize(records);
  return report;
}

cluster::ValidationSummary summarize(const std::vector<cluster::ClusterRecord>& records) {
  cluster::ValidationSummary s;
  s.clusters = records.size();
  for (const auto& r : records) {
    s.clones += r.members.size();
    if (r.validity == Validity::valid) ++s.valid;
    if (r.validity == Validity::false_positive) ++s.false_positives;
  }
  s.precision = s.clusters == 0 ? 0.0 : static_cast<double>(s.valid) / static_cast<double>(s.clusters);
  return s;
}

}  // namespace simclone::validate
