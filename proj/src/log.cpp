#include "softfoot/log.hpp"

#include <cstdlib>
#include <iostream>

namespace softfoot {

LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("SOFTFOOT_LOG");
    if (!env) return LogLevel::Quiet;
    const std::string value(env);
    if (value == "debug") return LogLevel::Debug;
    if (value == "info") return LogLevel::Info;
    return LogLevel::Quiet;
  }();
  return level;
}

void log_info(const std::string& message) {
  if (log_level() >= LogLevel::Info) std::cerr << "[softfoot] " << message << "\n";
}

void log_debug(const std::string& message) {
  if (log_level() >= LogLevel::Debug)
    std::cerr << "[softfoot:debug] " << message << "\n";
}

}  // namespace softfoot
