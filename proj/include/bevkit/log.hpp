#pragma once

#include <string_view>

namespace bevkit {

// Leveled stderr logging, configured once from the BEVKIT_LOG environment
// variable ("error", "warn", "info", "debug"; default "warn").
enum class LogLevel : int {
    Error = 0,
    Warn = 1,
    Info = 2,
    Debug = 3,
};

LogLevel log_level();

void log(LogLevel level, std::string_view message);
void log_error(std::string_view message);
void log_warn(std::string_view message);
void log_info(std::string_view message);
void log_debug(std::string_view message);

} // namespace bevkit
