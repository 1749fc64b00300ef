#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace agrihub {

/// Milliseconds since 1970-01-01T00:00:00Z.
using EpochMs = std::int64_t;

/// Unix epoch ms of 1980-01-01T00:00:00Z, the ISO 11783 timelog day origin.
inline constexpr EpochMs kIsobusEpochMs = 315'532'800'000;
inline constexpr EpochMs kMsPerDay = 86'400'000;

/// "YYYY-MM-DDTHH:MM:SS.sssZ"
std::string format_datetime(EpochMs ms);

/// Accepts exactly the format_datetime shape.
std::optional<EpochMs> parse_datetime(std::string_view text);

}  // namespace agrihub
