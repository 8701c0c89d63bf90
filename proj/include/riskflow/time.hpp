#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace riskflow {

using Timestamp = std::chrono::sys_seconds;

// RFC 3339, UTC only, second resolution: "2026-10-16T09:30:00Z".
std::string format_timestamp(Timestamp t);
Timestamp parse_timestamp(std::string_view text);

// Calendar date "YYYY-MM-DD".
std::string format_date(std::chrono::year_month_day d);
std::chrono::year_month_day parse_date(std::string_view text);

Timestamp now_utc();

} // namespace riskflow
