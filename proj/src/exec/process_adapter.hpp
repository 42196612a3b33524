#pragma once

#include <string>
#include <sys/types.h>

#include "exec/adapter.hpp"

namespace simclone::exec {

struct WorkerCommand {
  std::string command;         // shell command line starting the worker
  std::string resources_path;  // passed as --resources when non-empty
  std::string stderr_path;     // worker stderr; /dev/null when empty
  std::chrono::milliseconds load_timeout{60000};
};

// A worker process speaking newline-delimited JSON over its standard streams.
class ProcessAdapter : public Adapter {
 public:
  explicit ProcessAdapter(WorkerCommand cmd);
  ~ProcessAdapter() override;
  ProcessAdapter(const ProcessAdapter&) = delete;
  ProcessAdapter& operator=(const ProcessAdapter&) = delete;

  void load(const LoadSpec& spec) override;
  Outcome invoke(const Tuple& args, std::chrono::milliseconds timeout) override;
  void shutdown() override;
  [[nodiscard]] AdapterState state() const override { return state_; }
  [[nodiscard]] pid_t pid() const { return pid_; }

 private:
  WorkerCommand cmd_;
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  long long next_id_ = 0;
  AdapterState state_ = AdapterState::idle;

  void spawn();
  void kill_worker();
  void send(const std::string& line);
  // Next line from the worker; nullopt on deadline, throws AdapterCrash on EOF.
  std::optional<std::string> receive(std::chrono::steady_clock::time_point deadline);
};

}  // namespace simclone::exec
