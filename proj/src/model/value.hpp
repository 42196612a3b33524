#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "model/types.hpp"

namespace simclone {

struct Null {
  friend bool operator==(Null, Null) { return true; }
};

struct Char {
  char32_t code = 0;
  friend bool operator==(Char, Char) = default;
};

struct FileRef {
  std::string id;
  friend bool operator==(const FileRef&, const FileRef&) = default;
};

// Language-neutral runtime value.
class Value {
 public:
  using Array = std::vector<Value>;
  using Object = std::vector<std::pair<std::string, Value>>;
  using Storage = std::variant<Null, bool, std::int64_t, double, Char, std::string, Array, Object, FileRef>;

  Value() = default;
  Value(Storage data) : data_(std::move(data)) {}  // NOLINT(google-explicit-constructor)

  static Value null() { return Value(Null{}); }
  static Value boolean(bool b) { return Value(b); }
  static Value integer(std::int64_t i) { return Value(i); }
  static Value real(double d) { return Value(d); }
  static Value character(char32_t c) { return Value(Char{c}); }
  static Value string(std::string s) { return Value(std::move(s)); }
  static Value array(Array items) { return Value(std::move(items)); }
  static Value object(Object members) { return Value(std::move(members)); }
  static Value file(std::string id) { return Value(FileRef{std::move(id)}); }

  [[nodiscard]] const Storage& data() const noexcept { return data_; }

  template <typename T>
  [[nodiscard]] bool is() const noexcept {
    return std::holds_alternative<T>(data_);
  }
  template <typename T>
  [[nodiscard]] const T& as() const {
    return std::get<T>(data_);
  }

  // Structural identity: reals compare bit-for-bit (so NaN matches NaN).
  friend bool operator==(const Value& a, const Value& b);

 private:
  Storage data_;
};

using Tuple = std::vector<Value>;

nlohmann::json to_tagged(const Value& v);
Value from_tagged(const nlohmann::json& j);
nlohmann::json tuple_to_json(const Tuple& t);
Tuple tuple_from_json(const nlohmann::json& j);
// Compact JSON text of a tuple; stable and usable as a lookup key.
std::string encode_tuple(const Tuple& t);
std::string describe(const Value& v);

enum class Status { ok, exception, timeout };

std::string_view status_name(Status s) noexcept;

struct Outcome {
  Status status = Status::exception;
  std::optional<Value> value;
  std::optional<std::string> detail;
  std::chrono::microseconds elapsed{0};

  static Outcome ok(Value v, std::chrono::microseconds elapsed = {}) {
    return {Status::ok, std::move(v), std::nullopt, elapsed};
  }
  static Outcome exception(std::string detail, std::chrono::microseconds elapsed = {}) {
    return {Status::exception, std::nullopt, std::move(detail), elapsed};
  }
  static Outcome timeout(std::chrono::microseconds elapsed) {
    return {Status::timeout, std::nullopt, std::string("timeout"), elapsed};
  }
};

nlohmann::json outcome_to_json(const Outcome& o);
Outcome outcome_from_json(const nlohmann::json& j);

struct Record {
  Tuple inputs;
  Outcome outcome;
};

struct IOProfile {
  std::string function_id;
  Signature signature;
  std::vector<Record> records;
  std::string pool_key;
};

enum class Validity { unvalidated, valid, false_positive };

std::string_view validity_name(Validity v) noexcept;

struct CloneCluster {
  std::vector<std::string> members;
  std::string representative;
  double sim_t = 1.0;
  Validity validity = Validity::unvalidated;
};

}  // namespace simclone
