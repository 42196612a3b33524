#include "validate/consistency.hpp"

#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "cluster/similarity.hpp"
#include "inputs/sampler.hpp"
#include "model/error.hpp"

namespace simclone::validate {

namespace {

constexpr double kRel = 1e-6;
constexpr double kAbs = 1e-9;

bool close(double a, double b) {
  return std::fabs(a - b) <= std::max(kRel * std::max(std::fabs(a), std::fabs(b)), kAbs);
}

std::optional<double> number(const Value& v) {
  if (v.is<std::int64_t>()) return static_cast<double>(v.as<std::int64_t>());
  if (v.is<double>()) return v.as<double>();
  if (v.is<bool>()) return v.as<bool>() ? 1.0 : 0.0;
  return std::nullopt;
}

std::optional<std::string> text(const Value& v) {
  if (v.is<std::string>()) return v.as<std::string>();
  if (v.is<Char>()) {
    std::string s;
    inputs::append_utf8(s, v.as<Char>().code);
    return s;
  }
  return std::nullopt;
}

using Leaves = std::map<std::string, Value>;

void flatten(const Value& v, const std::string& path, Leaves& out) {
  if (v.is<Value::Array>()) {
    const auto& a = v.as<Value::Array>();
    out[path + "#"] = Value::integer(static_cast<std::int64_t>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) flatten(a[i], path + "[" + std::to_string(i) + "]", out);
  } else if (v.is<Value::Object>()) {
    for (const auto& [name, member] : v.as<Value::Object>()) flatten(member, path + "." + name, out);
  } else {
    out[path] = v;
  }
}

using Pairs = std::vector<std::pair<Value, Value>>;

bool consistent(const Pairs& pairs) {
  bool equal = true;
  for (const auto& [a, b] : pairs) equal = equal && cluster::values_equal(a, b);
  if (equal) return true;
  bool numeric = true;
  bool textual = true;
  for (const auto& [a, b] : pairs) {
    numeric = numeric && number(a) && number(b);
    textual = textual && text(a) && text(b);
  }
  if (numeric) {
    std::optional<double> offset;
    bool offset_ok = true;
    std::optional<double> ratio;
    bool ratio_ok = true;
    for (const auto& [a, b] : pairs) {
      const double x = *number(a);
      const double y = *number(b);
      if (!offset) offset = y - x;
      offset_ok = offset_ok && close(*offset, y - x);
      if (x == 0.0 && y == 0.0) continue;
      if (x == 0.0 || y == 0.0) {
        ratio_ok = false;
        continue;
      }
      if (!ratio) ratio = y / x;
      ratio_ok = ratio_ok && close(*ratio, y / x);
    }
    return offset_ok || ratio_ok;
  }
  if (textual) {
    std::optional<std::size_t> d;
    for (const auto& [a, b] : pairs) {
      const auto e = levenshtein(*text(a), *text(b));
      if (!d) d = e;
      if (*d != e) return false;
    }
    return true;
  }
  return false;
}

}  // namespace

std::size_t levenshtein(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

bool output_consistency(const IOProfile& p, const IOProfile& q) {
  if (p.records.size() != q.records.size()) {
    throw Error(ErrorCode::pool_mismatch, "profiles are not aligned");
  }
  std::map<std::string, Pairs> by_path;
  std::size_t ok_pairs = 0;
  bool broken = false;
  for (std::size_t i = 0; i < p.records.size(); ++i) {
    const auto& a = p.records[i].outcome;
    const auto& b = q.records[i].outcome;
    const bool ra = a.status == Status::ok;
    const bool rb = b.status == Status::ok;
    if (ra != rb) broken = true;
    if (!ra || !rb) continue;
    ++ok_pairs;
    Leaves la;
    Leaves lb;
    flatten(*a.value, "", la);
    flatten(*b.value, "", lb);
    if (la.size() != lb.size()) {
      broken = true;
      continue;
    }
    for (auto ia = la.begin(), ib = lb.begin(); ia != la.end(); ++ia, ++ib) {
      if (ia->first != ib->first) {
        broken = true;
        break;
      }
      by_path[ia->first].emplace_back(ia->second, ib->second);
    }
  }
  if (ok_pairs < 2) throw Error(ErrorCode::insufficient_data, "fewer than two comparable outputs");
  if (broken) return false;
  for (const auto& [path, pairs] : by_path) {
    if (!consistent(pairs)) return false;
  }
  return true;
}

}  // namespace simclone::validate
