#include "bevkit/log.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace bevkit {

namespace {

LogLevel parse_level() {
    const char* env = std::getenv("BEVKIT_LOG");
    if (!env)
        return LogLevel::Warn;
    std::string s(env);
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (s == "error") return LogLevel::Error;
    if (s == "warn") return LogLevel::Warn;
    if (s == "info") return LogLevel::Info;
    if (s == "debug") return LogLevel::Debug;
    return LogLevel::Warn;
}

const char* level_name(LogLevel l) {
    switch (l) {
    case LogLevel::Error: return "error";
    case LogLevel::Warn: return "warn";
    case LogLevel::Info: return "info";
    case LogLevel::Debug: return "debug";
    }
    return "?";
}

} // namespace

LogLevel log_level() {
    static const LogLevel level = parse_level();
    return level;
}

void log(LogLevel level, std::string_view message) {
    if (static_cast<int>(level) > static_cast<int>(log_level()))
        return;
    std::fprintf(stderr, "[bevkit] %s: %.*s\n", level_name(level),
                 static_cast<int>(message.size()), message.data());
}

void log_error(std::string_view m) { log(LogLevel::Error, m); }
void log_warn(std::string_view m) { log(LogLevel::Warn, m); }
void log_info(std::string_view m) { log(LogLevel::Info, m); }
void log_debug(std::string_view m) { log(LogLevel::Debug, m); }

} // namespace bevkit
