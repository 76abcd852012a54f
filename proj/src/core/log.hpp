#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace ds::log {

enum class Level { error = 0, warn = 1, info = 2, debug = 3 };

using Sink = std::function<void(Level, std::string_view)>;

void set_level(Level level);
Level level();

// Replaces the output sink (default writes "[level] message" to stderr).
// Passing an empty function restores the default.
void set_sink(Sink sink);

void error(const std::string& message);
void warn(const std::string& message);
void info(const std::string& message);
void debug(const std::string& message);

}  // namespace ds::log
