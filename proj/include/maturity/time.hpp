#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace maturity {

// UTC, whole seconds.
using Timestamp = std::chrono::sys_seconds;

// "2024-03-01T12:00:00Z"
std::string format_timestamp(Timestamp t);
// Accepts "YYYY-MM-DDTHH:MM:SSZ" and a bare "YYYY-MM-DD" (midnight UTC).
std::optional<Timestamp> parse_timestamp(std::string_view text);

using Clock = std::function<Timestamp()>;
Timestamp system_now();

}  // namespace maturity
