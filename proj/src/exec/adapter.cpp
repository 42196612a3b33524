#include "exec/adapter.hpp"

#include <exception>

namespace simclone::exec {

namespace {

using Clock = std::chrono::steady_clock;

std::chrono::microseconds since(Clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - t0);
}

}  // namespace

std::shared_ptr<const std::map<std::string, Outcome>> ReplayAdapter::index(const Table& table) {
  auto m = std::make_shared<std::map<std::string, Outcome>>();
  for (const auto& [in, out] : table) (*m)[encode_tuple(in)] = out;
  return m;
}

ReplayAdapter::ReplayAdapter(const Table& table) : table_(index(table)) {}

Outcome ReplayAdapter::invoke(const Tuple& args, std::chrono::milliseconds) {
  auto it = table_->find(encode_tuple(args));
  if (it == table_->end()) return Outcome::exception("untabulated");
  return it->second;
}

Outcome CallableAdapter::invoke(const Tuple& args, std::chrono::milliseconds) {
  const auto t0 = Clock::now();
  try {
    Value v = fn_(args);
    return Outcome::ok(std::move(v), since(t0));
  } catch (const std::exception& e) {
    return Outcome::exception(e.what(), since(t0));
  } catch (...) {
    return Outcome::exception("unknown", since(t0));
  }
}

}  // namespace simclone::exec
