#include "ringqed/diagnostics.hpp"

#include <iostream>
#include <mutex>

namespace ringqed {

namespace {
std::mutex handler_mutex;
WarningHandler& handler() {
  static WarningHandler h = [](std::string_view msg) { std::cerr << "warning: " << msg << '\n'; };
  return h;
}
}  // namespace

WarningHandler set_warning_handler(WarningHandler h) {
  std::lock_guard lock(handler_mutex);
  WarningHandler previous = std::move(handler());
  handler() = std::move(h);
  return previous;
}

void warn(std::string_view message) {
  std::lock_guard lock(handler_mutex);
  if (handler()) handler()(message);
}

}  // namespace ringqed
