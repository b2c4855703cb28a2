#pragma once

#include <string>

namespace softfoot {

// Verbosity from SOFTFOOT_LOG: quiet (default), info, debug. Messages go to
// stderr so file outputs stay byte-stable.
enum class LogLevel { Quiet = 0, Info = 1, Debug = 2 };

LogLevel log_level();
void log_info(const std::string& message);
void log_debug(const std::string& message);

}  // namespace softfoot
