#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "model/error.hpp"
#include "model/value.hpp"

namespace simclone::exec {

struct LoadSpec {
  std::string source_path;  // absolute
  std::string entry;
  std::string signature;    // canonical signature
};

// The worker died or broke the protocol in the middle of a batch.
class AdapterCrash : public Error {
 public:
  explicit AdapterCrash(const std::string& message) : Error(ErrorCode::protocol, message) {}
};

enum class AdapterState { idle, loaded, dead };

// One worker able to run a single loaded function.
class Adapter {
 public:
  virtual ~Adapter() = default;

  // Throws Error(ErrorCode::load) when the function cannot be loaded.
  virtual void load(const LoadSpec& spec) = 0;
  // Throws AdapterCrash when the worker dies; a timeout kills the worker and
  // reports Status::timeout.
  virtual Outcome invoke(const Tuple& args, std::chrono::milliseconds timeout) = 0;
  virtual void shutdown() {}
  [[nodiscard]] virtual AdapterState state() const = 0;
};

using AdapterFactory = std::function<std::unique_ptr<Adapter>()>;

// Serves tabulated outcomes keyed by exact input tuples.
class ReplayAdapter : public Adapter {
 public:
  using Table = std::vector<std::pair<Tuple, Outcome>>;
  explicit ReplayAdapter(const Table& table);
  explicit ReplayAdapter(std::shared_ptr<const std::map<std::string, Outcome>> table) : table_(std::move(table)) {}

  void load(const LoadSpec&) override { state_ = AdapterState::loaded; }
  Outcome invoke(const Tuple& args, std::chrono::milliseconds timeout) override;
  [[nodiscard]] AdapterState state() const override { return state_; }

  static std::shared_ptr<const std::map<std::string, Outcome>> index(const Table& table);

 private:
  std::shared_ptr<const std::map<std::string, Outcome>> table_;
  AdapterState state_ = AdapterState::idle;
};

// Runs an in-process callable; exceptions become exception outcomes. No
// timeout enforcement is possible in-process.
class CallableAdapter : public Adapter {
 public:
  using Fn = std::function<Value(const Tuple&)>;
  explicit CallableAdapter(Fn fn) : fn_(std::move(fn)) {}

  void load(const LoadSpec&) override { state_ = AdapterState::loaded; }
  Outcome invoke(const Tuple& args, std::chrono::milliseconds timeout) override;
  [[nodiscard]] AdapterState state() const override { return state_; }

 private:
  Fn fn_;
  AdapterState state_ = AdapterState::idle;
};

}  // namespace simclone::exec
