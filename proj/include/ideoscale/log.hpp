#pragma once

#include <string>

namespace ideoscale {

enum class LogLevel { Quiet, Warn, Info };

void set_log_level(LogLevel level);
LogLevel log_level();

void log_warn(const std::string& msg);
void log_info(const std::string& msg);

}  // namespace ideoscale
