#pragma once

#include <string_view>

namespace kbqe::log {

enum class Level { debug = 0, info = 1, warn = 2, error = 3, off = 4 };

/// Messages below the threshold are dropped. Default: warn.
void set_threshold(Level level);
Level threshold();

/// Writes "[level] message" to stderr when enabled.
void write(Level level, std::string_view message);

inline bool enabled(Level level) { return level >= threshold(); }
inline void debug(std::string_view m) { write(Level::debug, m); }
inline void info(std::string_view m) { write(Level::info, m); }
inline void warn(std::string_view m) { write(Level::warn, m); }

}  // namespace kbqe::log
