#include "exec/process_adapter.hpp"

#include <csignal>
#include <cerrno>
#include <cstring>
#include <fcntl.h>
#include <mutex>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

namespace simclone::exec {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

namespace {

void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { std::signal(SIGPIPE, SIG_IGN); });
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

}  // namespace

ProcessAdapter::ProcessAdapter(WorkerCommand cmd) : cmd_(std::move(cmd)) {
  ignore_sigpipe();
  spawn();
}

ProcessAdapter::~ProcessAdapter() {
  if (state_ != AdapterState::dead) shutdown();
  kill_worker();
}

void ProcessAdapter::spawn() {
  int in_pipe[2], out_pipe[2];
  if (pipe2(in_pipe, O_CLOEXEC) != 0 || pipe2(out_pipe, O_CLOEXEC) != 0) {
    throw Error(ErrorCode::io, std::string("pipe: ") + std::strerror(errno));
  }
  std::string line = "exec " + cmd_.command;
  if (!cmd_.resources_path.empty()) line += " --resources " + shell_quote(cmd_.resources_path);
  const std::string err_path = cmd_.stderr_path.empty() ? "/dev/null" : cmd_.stderr_path;
  const char* argv[] = {"/bin/sh", "-c", line.c_str(), nullptr};
  const pid_t pid = fork();
  if (pid < 0) throw Error(ErrorCode::io, std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    setpgid(0, 0);
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    const int err = open(err_path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
    if (err >= 0) dup2(err, STDERR_FILENO);
    execv("/bin/sh", const_cast<char* const*>(argv));
    _exit(127);
  }
  setpgid(pid, pid);
  close(in_pipe[0]);
  close(out_pipe[1]);
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  buffer_.clear();
  state_ = AdapterState::idle;
}

void ProcessAdapter::kill_worker() {
  if (to_child_ >= 0) close(to_child_);
  if (from_child_ >= 0) close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ > 0) {
    kill(-pid_, SIGKILL);
    kill(pid_, SIGKILL);
    int status = 0;
    while (waitpid(pid_, &status, 0) < 0 && errno == EINTR) {
    }
    pid_ = -1;
  }
  state_ = AdapterState::dead;
}

void ProcessAdapter::send(const std::string& line) {
  std::string data = line + "\n";
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = write(to_child_, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      kill_worker();
      throw AdapterCrash("worker closed its input");
    }
    off += static_cast<std::size_t>(n);
  }
}

std::optional<std::string> ProcessAdapter::receive(Clock::time_point deadline) {
  for (;;) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
    if (left <= 0) return std::nullopt;
    pollfd p{from_child_, POLLIN, 0};
    const int r = poll(&p, 1, static_cast<int>(std::min<long long>(left, 1000)));
    if (r < 0 && errno != EINTR) {
      kill_worker();
      throw AdapterCrash(std::string("poll: ") + std::strerror(errno));
    }
    if (r <= 0) continue;
    char chunk[65536];
    const ssize_t n = read(from_child_, chunk, sizeof chunk);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      kill_worker();
      throw AdapterCrash("worker exited");
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

void ProcessAdapter::load(const LoadSpec& spec) {
  if (state_ == AdapterState::dead) spawn();
  json msg = {{"op", "load"}, {"source_path", spec.source_path}, {"entry", spec.entry}, {"sig", spec.signature}};
  send(msg.dump());
  auto reply = receive(Clock::now() + cmd_.load_timeout);
  if (!reply) {
    kill_worker();
    throw Error(ErrorCode::load, "load timed out for " + spec.entry);
  }
  json j;
  try {
    j = json::parse(*reply);
  } catch (const json::exception&) {
    kill_worker();
    throw AdapterCrash("malformed load reply: " + *reply);
  }
  if (!j.value("ok", false)) {
    throw Error(ErrorCode::load, "load failed for " + spec.entry + ": " + j.value("detail", std::string("unknown")));
  }
  state_ = AdapterState::loaded;
}

Outcome ProcessAdapter::invoke(const Tuple& args, std::chrono::milliseconds timeout) {
  if (state_ != AdapterState::loaded) throw AdapterCrash("worker has no loaded function");
  const long long id = next_id_++;
  json msg = {{"op", "invoke"}, {"id", id}, {"args", tuple_to_json(args)}};
  const auto t0 = Clock::now();
  send(msg.dump());
  auto reply = receive(t0 + timeout);
  if (!reply) {
    const auto elapsed = std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - t0);
    kill_worker();
    return Outcome::timeout(elapsed);
  }
  try {
    const json j = json::parse(*reply);
    if (j.at("id").get<long long>() != id) throw AdapterCrash("reply id mismatch");
    const std::chrono::microseconds elapsed{j.value("elapsed_us", 0LL)};
    const std::string status = j.at("status").get<std::string>();
    if (status == "ok") return Outcome::ok(from_tagged(j.at("value")), elapsed);
    if (status == "exception") return Outcome::exception(j.value("detail", std::string("exception")), elapsed);
    throw AdapterCrash("unknown status " + status);
  } catch (const AdapterCrash&) {
    kill_worker();
    throw;
  } catch (const std::exception& e) {
    kill_worker();
    throw AdapterCrash(std::string("malformed invoke reply: ") + e.what());
  }
}

void ProcessAdapter::shutdown() {
  if (state_ == AdapterState::dead || to_child_ < 0) return;
  const std::string line = json{{"op", "shutdown"}}.dump() + "\n";
  [[maybe_unused]] const ssize_t n = write(to_child_, line.data(), line.size());
  close(to_child_);
  to_child_ = -1;
  // give the worker a moment to exit on its own
  const auto deadline = Clock::now() + std::chrono::milliseconds(200);
  int status = 0;
  while (Clock::now() < deadline) {
    const pid_t r = waitpid(pid_, &status, WNOHANG);
    if (r == pid_) {
      pid_ = -1;
      break;
    }
    usleep(5000);
  }
  kill_worker();
}

}  // namespace simclone::exec
