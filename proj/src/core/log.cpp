#include "core/log.hpp"

#include <cstdio>
#include <mutex>

namespace ds::log {
namespace {

Level g_level = Level::warn;
Sink g_sink;
std::mutex g_mutex;

const char* level_name(Level level) {
  switch (level) {
    case Level::error: return "error";
    case Level::warn: return "warn";
    case Level::info: return "info";
    case Level::debug: return "debug";
  }
  return "?";
}

void emit(Level level, const std::string& message) {
  if (static_cast<int>(level) > static_cast<int>(g_level)) return;
  std::lock_guard<std::mutex> lock(g_mutex);
  if (g_sink) {
    g_sink(level, message);
  } else {
    std::fprintf(stderr, "[%s] %s\n", level_name(level), message.c_str());
  }
}

}  // namespace

void set_level(Level level) { g_level = level; }
Level level() { return g_level; }
void set_sink(Sink sink) { g_sink = std::move(sink); }

void error(const std::string& message) { emit(Level::error, message); }
void warn(const std::string& message) { emit(Level::warn, message); }
void info(const std::string& message) { emit(Level::info, message); }
void debug(const std::string& message) { emit(Level::debug, message); }

}  // namespace ds::log
