#include "cluster/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "model/error.hpp"

namespace simclone::cluster {

using nlohmann::json;

bool ClusterRecord::cross_language() const {
  std::set<std::string> langs;
  for (const auto& m : members) langs.insert(m.language);
  return langs.size() > 1;
}

std::vector<ClusterRecord> build_records(const std::vector<CloneCluster>& clusters, const MemberTable& members,
                                         const std::string& method) {
  std::vector<ClusterRecord> out;
  for (const auto& c : clusters) {
    ClusterRecord r;
    r.method = method;
    r.sim_t = c.sim_t;
    r.representative = c.representative;
    r.validity = c.validity;
    std::set<std::string> seen;
    for (const auto& id : c.members) {
      auto it = members.find(id);
      MemberInfo info = it != members.end() ? it->second : MemberInfo{id, "unknown", id, false};
      if (seen.insert(info.origin).second) r.members.push_back(std::move(info));
    }
    if (r.members.size() < 2) continue;
    char buf[16];
    std::snprintf(buf, sizeof buf, "c%04zu", out.size() + 1);
    r.id = buf;
    out.push_back(std::move(r));
  }
  return out;
}

json record_to_json(const ClusterRecord& r) {
  json members = json::array();
  for (const auto& m : r.members) {
    members.push_back({{"id", m.id}, {"language", m.language}, {"origin", m.origin}, {"whole_method", m.whole_method}});
  }
  return {{"kind", "cluster"},
          {"schema", kReportSchema},
          {"cluster", r.id},
          {"method", r.method},
          {"sim_t", r.sim_t},
          {"representative", r.representative},
          {"cross_language", r.cross_language()},
          {"members", std::move(members)},
          {"validity", validity_name(r.validity)}};
}

ClusterRecord record_from_json(const json& j) {
  ClusterRecord r;
  r.id = j.at("cluster").get<std::string>();
  r.method = j.at("method").get<std::string>();
  r.sim_t = j.at("sim_t").get<double>();
  r.representative = j.at("representative").get<std::string>();
  for (const auto& m : j.at("members")) {
    r.members.push_back({m.at("id").get<std::string>(), m.at("language").get<std::string>(),
                         m.at("origin").get<std::string>(), m.at("whole_method").get<bool>()});
  }
  const auto v = j.value("validity", std::string("unvalidated"));
  r.validity = v == "valid" ? Validity::valid : v == "false_positive" ? Validity::false_positive : Validity::unvalidated;
  return r;
}

json summary_to_json(const ValidationSummary& s) {
  return {{"kind", "validation"},  {"schema", kReportSchema}, {"clusters", s.clusters},
          {"clones", s.clones},    {"valid", s.valid},         {"false_positives", s.false_positives},
          {"precision", s.precision}, {"seed", s.seed},        {"inputs", s.inputs}};
}

void write_records(const std::filesystem::path& path, const std::vector<ClusterRecord>& records,
                   const std::optional<ValidationSummary>& summary) {
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    for (const auto& r : records) out << record_to_json(r).dump() << "\n";
    if (summary) out << summary_to_json(*summary).dump() << "\n";
    if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
  }
  std::filesystem::rename(tmp, path);
}

std::pair<std::vector<ClusterRecord>, std::optional<ValidationSummary>> read_records(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::missing_artifacts, "missing " + path.string());
  std::vector<ClusterRecord> records;
  std::optional<ValidationSummary> summary;
  std::string line;
  try {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto j = json::parse(line);
      if (j.value("kind", "") == "validation") {
        ValidationSummary s;
        s.clusters = j.at("clusters").get<std::size_t>();
        s.clones = j.at("clones").get<std::size_t>();
        s.valid = j.at("valid").get<std::size_t>();
        s.false_positives = j.at("false_positives").get<std::size_t>();
        s.precision = j.at("precision").get<double>();
        s.seed = j.value("seed", std::uint64_t{0});
        s.inputs = j.value("inputs", std::size_t{0});
        summary = s;
      } else {
        records.push_back(record_from_json(j));
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::load, path.string() + ": " + e.what());
  }
  return {std::move(records), summary};
}

std::string summary_row(const ValidationSummary& s) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-10s %-8s %-8s %-8s %-10s\n%-10zu %-8zu %-8zu %-8zu %.1f%%\n", "#clusters",
                "#clones", "#valid", "#fp", "precision", s.clusters, s.clones, s.valid, s.false_positives,
                100.0 * s.precision);
  return buf;
}

std::string render_digest(const std::vector<ClusterRecord>& records, const json& stats,
                          const std::optional<ValidationSummary>& summary) {
  std::ostringstream out;
  out << "simclone report (schema " << kReportSchema << ")\n";
  if (!stats.is_null()) {
    for (const auto& [k, v] : stats.items()) {
      if (v.is_primitive()) out << "  " << k << ": " << v.dump() << "\n";
    }
  }
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_partition(order.begin(), order.end(), [&](std::size_t i) { return records[i].cross_language(); });
  bool cross_header = false;
  bool single_header = false;
  for (std::size_t i : order) {
    const auto& r = records[i];
    if (r.cross_language() && !cross_header) {
      out << "\n== cross-language clusters ==\n";
      cross_header = true;
    } else if (!r.cross_language() && !single_header) {
      out << "\n== single-language clusters ==\n";
      single_header = true;
    }
    out << "\n" << r.id << " [" << r.method << ", sim_t " << r.sim_t << ", " << r.members.size() << " members";
    if (r.validity != Validity::unvalidated) out << ", " << validity_name(r.validity);
    out << "]\n";
    for (const auto& m : r.members) {
      out << "  " << (m.id == r.representative ? "* " : "  ") << m.id << "  " << m.language << "  " << m.origin
          << (m.whole_method ? "  (method)" : "") << "\n";
    }
  }
  if (records.empty()) out << "\nno clusters\n";
  if (summary) out << "\n" << summary_row(*summary);
  return out.str();
}

std::vector<CloneCluster> group_pairs(const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::map<std::string, std::size_t> index;
  std::vector<std::string> names;
  std::vector<std::size_t> parent;
  auto id_of = [&](const std::string& s) {
    auto [it, fresh] = index.emplace(s, names.size());
    if (fresh) {
      names.push_back(s);
      parent.push_back(parent.size());
    }
    return it->second;
  };
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [a, b] : pairs) {
    const auto x = find(id_of(a));
    const auto y = find(id_of(b));
    if (x != y) parent[std::max(x, y)] = std::min(x, y);
  }
  std::map<std::size_t, std::size_t> slot;
  std::vector<CloneCluster> out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const auto root = find(i);
    auto [it, fresh] = slot.emplace(root, out.size());
    if (fresh) {
      out.emplace_back();
      out.back().representative = names[i];
    }
    out[it->second].members.push_back(names[i]);
  }
  std::erase_if(out, [](const CloneCluster& c) { return c.members.size() < 2; });
  return out;
}

std::vector<std::pair<std::string, std::string>> parse_pairs(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    if (line[first] == '[' || line[first] == '{') {
      const auto j = json::parse(line, nullptr, false);
      if (j.is_array() && j.size() == 2 && j[0].is_string() && j[1].is_string()) {
        pairs.emplace_back(j[0].get<std::string>(), j[1].get<std::string>());
        continue;
      }
      if (j.is_object() && j.contains("a") && j.contains("b")) {
        pairs.emplace_back(j["a"].get<std::string>(), j["b"].get<std::string>());
        continue;
      }
      throw Error(ErrorCode::parse, "pair list line " + std::to_string(lineno) + " is not a pair");
    }
    std::string clean = line;
    std::replace(clean.begin(), clean.end(), ',', ' ');
    std::istringstream fields(clean);
    std::string a, b, extra;
    if (!(fields >> a >> b) || (fields >> extra)) {
      throw Error(ErrorCode::parse, "pair list line " + std::to_string(lineno) + " is not a pair");
    }
    pairs.emplace_back(a, b);
  }
  return pairs;
}

}  // namespace simclone::cluster
