#include "kbqe/log.hpp"

#include <atomic>
#include <cstdio>
#include <mutex>

namespace kbqe::log {
namespace {

std::atomic<Level> g_threshold{Level::warn};
std::mutex g_mutex;

const char* label(Level level) {
    switch (level) {
        case Level::debug: return "debug";
        case Level::info: return "info";
        case Level::warn: return "warn";
        case Level::error: return "error";
        case Level::off: break;
    }
    return "";
}

}  // namespace

void set_threshold(Level level) { g_threshold.store(level); }
Level threshold() { return g_threshold.load(); }

void write(Level level, std::string_view message) {
    if (!enabled(level) || level == Level::off) {
        return;
    }
    const std::lock_guard lock{g_mutex};
    std::fprintf(stderr, "[%s] %.*s\n", label(level), static_cast<int>(message.size()),
                 message.data());
}

}  // namespace kbqe::log
