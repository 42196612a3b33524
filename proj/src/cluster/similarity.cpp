#include "cluster/similarity.hpp"

#include <cmath>
#include <optional>
#include <variant>

#include "inputs/sampler.hpp"
#include "model/error.hpp"

namespace simclone::cluster {

namespace {

std::optional<std::int64_t> as_int(const Value& v) {
  if (v.is<std::int64_t>()) return v.as<std::int64_t>();
  if (v.is<bool>()) return v.as<bool>() ? 1 : 0;
  return std::nullopt;
}

bool reals_equal(double a, double b, const SimilarityConfig& cfg) {
  if (std::isnan(a) || std::isnan(b)) return std::isnan(a) && std::isnan(b);
  if (std::isinf(a) || std::isinf(b)) return a == b;
  const double scale = std::max(std::fabs(a), std::fabs(b));
  return std::fabs(a - b) <= std::max(cfg.real_tolerance * scale, cfg.abs_tolerance);
}

std::optional<std::string> as_text(const Value& v) {
  if (v.is<std::string>()) return v.as<std::string>();
  if (v.is<Char>()) {
    std::string s;
    inputs::append_utf8(s, v.as<Char>().code);
    return s;
  }
  return std::nullopt;
}

std::string exception_class(const std::string& detail) {
  const auto colon = detail.find(':');
  return colon == std::string::npos ? detail : detail.substr(0, colon);
}

}  // namespace

bool values_equal(const Value& a, const Value& b, const SimilarityConfig& cfg) {
  if (a.is<Null>() || b.is<Null>()) return a.is<Null>() && b.is<Null>();
  const auto ia = as_int(a);
  const auto ib = as_int(b);
  if (ia && ib) return *ia == *ib;
  const bool ra = a.is<double>();
  const bool rb = b.is<double>();
  if ((ra || ia) && (rb || ib)) {
    const double x = ra ? a.as<double>() : static_cast<double>(*ia);
    const double y = rb ? b.as<double>() : static_cast<double>(*ib);
    return reals_equal(x, y, cfg);
  }
  const auto ta = as_text(a);
  const auto tb = as_text(b);
  if (ta && tb) return *ta == *tb;
  if (a.is<Value::Array>() && b.is<Value::Array>()) {
    const auto& x = a.as<Value::Array>();
    const auto& y = b.as<Value::Array>();
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!values_equal(x[i], y[i], cfg)) return false;
    }
    return true;
  }
  if (a.is<Value::Object>() && b.is<Value::Object>()) {
    const auto& x = a.as<Value::Object>();
    const auto& y = b.as<Value::Object>();
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i].first != y[i].first || !values_equal(x[i].second, y[i].second, cfg)) return false;
    }
    return true;
  }
  if (a.is<FileRef>() && b.is<FileRef>()) return a.as<FileRef>() == b.as<FileRef>();
  return false;
}

bool outputs_equal(const Outcome& a, const Outcome& b, const SimilarityConfig& cfg) {
  if (a.status == Status::ok && b.status == Status::ok) return values_equal(*a.value, *b.value, cfg);
  if (cfg.exception_match && a.status == Status::exception && b.status == Status::exception) {
    return exception_class(a.detail.value_or("")) == exception_class(b.detail.value_or(""));
  }
  return false;
}

double similarity(const IOProfile& p, const IOProfile& q, const SimilarityConfig& cfg) {
  if (p.pool_key != q.pool_key || p.records.size() != q.records.size()) {
    throw Error(ErrorCode::pool_mismatch,
                "profiles " + p.function_id + " and " + q.function_id + " were not run on the same pool");
  }
  if (p.records.empty()) return 0.0;
  std::size_t same = 0;
  for (std::size_t i = 0; i < p.records.size(); ++i) {
    if (outputs_equal(p.records[i].outcome, q.records[i].outcome, cfg)) ++same;
  }
  return static_cast<double>(same) / static_cast<double>(p.records.size());
}

bool comparable(const Signature& a, const Signature& b) {
  if (a.args.size() != b.args.size()) return false;
  auto castable = [](const TypeDescriptor& x, const TypeDescriptor& y) {
    return cast_lattice(x, y) || cast_lattice(y, x);
  };
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!castable(a.args[i], b.args[i])) return false;
  }
  return castable(a.ret, b.ret);
}

std::vector<CloneCluster> partition(std::span<const IOProfile* const> profiles, const SimilarityConfig& cfg) {
  std::vector<CloneCluster> groups;
  std::vector<const IOProfile*> reps;
  for (const IOProfile* p : profiles) {
    bool placed = false;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const IOProfile* r = reps[g];
      if (r->pool_key != p->pool_key || r->records.size() != p->records.size()) continue;
      if (!comparable(r->signature, p->signature)) continue;
      if (similarity(*r, *p, cfg) >= cfg.sim_t) {
        groups[g].members.push_back(p->function_id);
        placed = true;
        break;
      }
    }
    if (!placed) {
      CloneCluster c;
      c.members.push_back(p->function_id);
      c.representative = p->function_id;
      c.sim_t = cfg.sim_t;
      groups.push_back(std::move(c));
      reps.push_back(p);
    }
  }
  return groups;
}

std::vector<CloneCluster> find_clusters(std::span<const IOProfile* const> profiles, const SimilarityConfig& cfg) {
  auto groups = partition(profiles, cfg);
  std::erase_if(groups, [](const CloneCluster& c) { return c.members.size() < 2; });
  return groups;
}

}  // namespace simclone::cluster
