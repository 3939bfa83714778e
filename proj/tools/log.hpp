#pragma once

#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace ciota::cli {

/// CIOTA_LOG: error | warn (default) | info | debug
inline int log_level() {
  static const int level = [] {
    const char* env = std::getenv("CIOTA_LOG");
    if (env == nullptr) return 1;
    if (std::strcmp(env, "debug") == 0) return 3;
    if (std::strcmp(env, "info") == 0) return 2;
    if (std::strcmp(env, "warn") == 0) return 1;
    return 0;
  }();
  return level;
}

inline void log_at(int level, const char* tag, const char* fmt, va_list args) {
  if (log_level() < level) return;
  std::fprintf(stderr, "ciota[%s] ", tag);
  std::vfprintf(stderr, fmt, args);
  std::fputc('\n', stderr);
}

inline void log_warn(const char* fmt, ...) {
  va_list args;
  va_start(args, fmt);
  log_at(1, "warn", fmt, args);
  va_end(args);
}

inline void log_info(const char* fmt, ...) {
  va_list args;
  va_start(args, fmt);
  log_at(2, "info", fmt, args);
  va_end(args);
}

inline void log_debug(const char* fmt, ...) {
  va_list args;
  va_start(args, fmt);
  log_at(3, "debug", fmt, args);
  va_end(args);
}

} // namespace ciota::cli
