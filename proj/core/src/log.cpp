#include "romstab/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>

namespace romstab {

namespace {

LogLevel parse_level() {
  const char* env = std::getenv("ROMSTAB_LOG");
  if (env == nullptr) return LogLevel::Info;
  std::string value(env);
  for (char& c : value) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (value == "off" || value == "none") return LogLevel::Off;
  if (value == "error") return LogLevel::Error;
  if (value == "warn" || value == "warning") return LogLevel::Warn;
  if (value == "info") return LogLevel::Info;
  if (value == "debug") return LogLevel::Debug;
  return LogLevel::Info;
}

const char* tag(LogLevel level) {
  switch (level) {
    case LogLevel::Error: return "error";
    case LogLevel::Warn: return "warn";
    case LogLevel::Info: return "info";
    case LogLevel::Debug: return "debug";
    default: return "";
  }
}

}  // namespace

LogLevel log_level() {
  static const LogLevel level = parse_level();
  return level;
}

void log_message(LogLevel level, std::string_view msg) {
  if (static_cast<int>(level) > static_cast<int>(log_level())) return;
  std::fprintf(stderr, "[romstab] %s: %.*s\n", tag(level), static_cast<int>(msg.size()),
               msg.data());
}

}  // namespace romstab
