#pragma once

#include <string_view>

namespace romstab {

enum class LogLevel { Off = 0, Error, Warn, Info, Debug };

/// Level parsed once from the ROMSTAB_LOG environment variable
/// (off|error|warn|info|debug, default info). Messages go to stderr.
LogLevel log_level();

void log_message(LogLevel level, std::string_view msg);

inline void log_error(std::string_view msg) { log_message(LogLevel::Error, msg); }
inline void log_warn(std::string_view msg) { log_message(LogLevel::Warn, msg); }
inline void log_info(std::string_view msg) { log_message(LogLevel::Info, msg); }
inline void log_debug(std::string_view msg) { log_message(LogLevel::Debug, msg); }

}  // namespace romstab
