#include "model/value.hpp"

#include <bit>
#include <cmath>
#include <limits>

#include "model/error.hpp"

namespace simclone {

using nlohmann::json;

namespace {

std::string utf8_encode(char32_t cp) {
  std::string out;
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
  return out;
}

// Decodes exactly one code point; returns nullopt when `s` holds anything else.
std::optional<char32_t> utf8_single(const std::string& s) {
  if (s.empty()) return std::nullopt;
  const auto b0 = static_cast<unsigned char>(s[0]);
  std::size_t len = b0 < 0x80 ? 1 : (b0 >> 5) == 0x6 ? 2 : (b0 >> 4) == 0xE ? 3 : (b0 >> 3) == 0x1E ? 4 : 0;
  if (len == 0 || s.size() != len) return std::nullopt;
  char32_t cp = len == 1 ? b0 : len == 2 ? (b0 & 0x1F) : len == 3 ? (b0 & 0x0F) : (b0 & 0x07);
  for (std::size_t i = 1; i < len; ++i) {
    const auto b = static_cast<unsigned char>(s[i]);
    if ((b >> 6) != 0x2) return std::nullopt;
    cp = (cp << 6) | (b & 0x3F);
  }
  return cp;
}

[[noreturn]] void bad(const std::string& what) {
  throw Error(ErrorCode::protocol, "malformed tagged value: " + what);
}

}  // namespace

bool operator==(const Value& a, const Value& b) {
  if (a.data_.index() != b.data_.index()) return false;
  if (a.is<double>()) {
    return std::bit_cast<std::uint64_t>(a.as<double>()) == std::bit_cast<std::uint64_t>(b.as<double>());
  }
  return a.data_ == b.data_;
}

json to_tagged(const Value& v) {
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Null>) {
          return {{"t", "null"}, {"v", nullptr}};
        } else if constexpr (std::is_same_v<T, bool>) {
          return {{"t", "b"}, {"v", x}};
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return {{"t", "i"}, {"v", x}};
        } else if constexpr (std::is_same_v<T, double>) {
          if (std::isnan(x)) return {{"t", "f"}, {"v", "nan"}};
          if (std::isinf(x)) return {{"t", "f"}, {"v", x > 0 ? "inf" : "-inf"}};
          return {{"t", "f"}, {"v", x}};
        } else if constexpr (std::is_same_v<T, Char>) {
          return {{"t", "c"}, {"v", utf8_encode(x.code)}};
        } else if constexpr (std::is_same_v<T, std::string>) {
          return {{"t", "s"}, {"v", x}};
        } else if constexpr (std::is_same_v<T, Value::Array>) {
          json items = json::array();
          for (const auto& e : x) items.push_back(to_tagged(e));
          return {{"t", "a"}, {"v", std::move(items)}};
        } else if constexpr (std::is_same_v<T, Value::Object>) {
          json members = json::array();
          for (const auto& [name, value] : x) members.push_back(json::array({name, to_tagged(value)}));
          return {{"t", "o"}, {"v", std::move(members)}};
        } else {
          return {{"t", "file"}, {"v", x.id}};
        }
      },
      v.data());
}

Value from_tagged(const json& j) {
  if (!j.is_object() || !j.contains("t") || !j.contains("v")) bad("expected {t,v}");
  const auto& tag = j.at("t");
  if (!tag.is_string()) bad("tag is not a string");
  const std::string t = tag.get<std::string>();
  const json& v = j.at("v");
  if (t == "null") return Value::null();
  if (t == "b") {
    if (!v.is_boolean()) bad("b expects a boolean");
    return Value::boolean(v.get<bool>());
  }
  if (t == "i") {
    if (v.is_number_integer()) return Value::integer(v.get<std::int64_t>());
    bad("i expects an integer");
  }
  if (t == "f") {
    if (v.is_number()) return Value::real(v.get<double>());
    if (v.is_string()) {
      const auto s = v.get<std::string>();
      if (s == "nan") return Value::real(std::numeric_limits<double>::quiet_NaN());
      if (s == "inf") return Value::real(std::numeric_limits<double>::infinity());
      if (s == "-inf") return Value::real(-std::numeric_limits<double>::infinity());
    }
    bad("f expects a number");
  }
  if (t == "c") {
    if (!v.is_string()) bad("c expects a string");
    auto cp = utf8_single(v.get<std::string>());
    if (!cp) bad("c expects exactly one code point");
    return Value::character(*cp);
  }
  if (t == "s") {
    if (!v.is_string()) bad("s expects a string");
    return Value::string(v.get<std::string>());
  }
  if (t == "a") {
    if (!v.is_array()) bad("a expects an array");
    Value::Array items;
    items.reserve(v.size());
    for (const auto& e : v) items.push_back(from_tagged(e));
    return Value::array(std::move(items));
  }
  if (t == "o") {
    if (!v.is_array()) bad("o expects a member list");
    Value::Object members;
    for (const auto& m : v) {
      if (!m.is_array() || m.size() != 2 || !m[0].is_string()) bad("o member must be [name, value]");
      members.emplace_back(m[0].get<std::string>(), from_tagged(m[1]));
    }
    return Value::object(std::move(members));
  }
  if (t == "file") {
    if (!v.is_string()) bad("file expects a resource id");
    return Value::file(v.get<std::string>());
  }
  bad("unknown tag '" + t + "'");
}

json tuple_to_json(const Tuple& t) {
  json arr = json::array();
  for (const auto& v : t) arr.push_back(to_tagged(v));
  return arr;
}

Tuple tuple_from_json(const json& j) {
  if (!j.is_array()) bad("tuple must be an array");
  Tuple t;
  t.reserve(j.size());
  for (const auto& e : j) t.push_back(from_tagged(e));
  return t;
}

std::string encode_tuple(const Tuple& t) { return tuple_to_json(t).dump(); }

std::string describe(const Value& v) {
  const json j = to_tagged(v);
  return j.at("v").dump();
}

std::string_view status_name(Status s) noexcept {
  switch (s) {
    case Status::ok: return "ok";
    case Status::exception: return "exception";
    case Status::timeout: return "timeout";
  }
  return "exception";
}

json outcome_to_json(const Outcome& o) {
  json j = {{"status", status_name(o.status)}, {"elapsed_us", o.elapsed.count()}};
  if (o.value) j["value"] = to_tagged(*o.value);
  if (o.detail) j["detail"] = *o.detail;
  return j;
}

Outcome outcome_from_json(const json& j) {
  Outcome o;
  const auto status = j.at("status").get<std::string>();
  if (status == "ok") {
    o.status = Status::ok;
  } else if (status == "exception") {
    o.status = Status::exception;
  } else if (status == "timeout") {
    o.status = Status::timeout;
  } else {
    bad("unknown status '" + status + "'");
  }
  if (j.contains("value")) o.value = from_tagged(j.at("value"));
  if (j.contains("detail")) o.detail = j.at("detail").get<std::string>();
  if (j.contains("elapsed_us")) o.elapsed = std::chrono::microseconds(j.at("elapsed_us").get<std::int64_t>());
  if ((o.status == Status::ok) != o.value.has_value()) bad("value must be present iff status is ok");
  return o;
}

std::string_view validity_name(Validity v) noexcept {
  switch (v) {
    case Validity::unvalidated: return "unvalidated";
    case Validity::valid: return "valid";
    case Validity::false_positive: return "false_positive";
  }
  return "unvalidated";
}

}  // namespace simclone
