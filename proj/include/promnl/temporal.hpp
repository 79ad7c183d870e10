// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

namespace promnl {

enum class TimeStrategy { Shorthand, NlDuration, Calendar, SpecificDate, Explicit, Default };

std::string_view to_string(TimeStrategy s) noexcept;

/// A resolved window plus the PromQL range selector paired with it.
struct TimeRangeInfo {
  std::chrono::sys_seconds start{};
  std::chrono::sys_seconds end{};
  std::string rate_syntax;    // e.g. "[6h]"
  std::string duration_text;  // e.g. "6 hours"
  std::chrono::seconds duration{0};
  TimeStrategy strategy = TimeStrategy::Default;

  bool operator==(const TimeRangeInfo&) const = default;
};

struct ExplicitRange {
  std::chrono::sys_seconds start;
  std::chrono::sys_seconds end;
};

/// How "yesterday" is read: a 24 hour window ending now, or the previous
/// calendar day (UTC).
enum class YesterdayMode { Rolling, CalendarDay };

struct TemporalConfig {
  std::chrono::seconds default_window{3600};
  YesterdayMode yesterday_mode = YesterdayMode::Rolling;

  static TemporalConfig from_json(const nlohmann::json& doc);
};

/// Tries, in order: caller-supplied timestamps, shorthand ("15m"), relative
/// durations ("last 6 hours", "3 days ago"), calendar references ("yesterday",
/// "this week", "March 2025"), specific dates ("2025-03-14", "last tuesday"),
/// then the default window. All calendar arithmetic is UTC and relative to
/// `now`; the wall clock is never read.
///
/// Throws Error(Input) when now is not positive, the default window is not
/// positive, or the explicit range is empty or inverted.
TimeRangeInfo resolve_time(std::string_view question, std::optional<ExplicitRange> explicit_range,
                           std::chrono::sys_seconds now, std::chrono::seconds default_window,
                           YesterdayMode yesterday_mode = YesterdayMode::Rolling);

/// Minute syntax below one hour, hour syntax below 48 hours, day syntax
/// beyond; counts round up. Throws Error(Input) for non-positive durations.
std::string rate_syntax_for(std::chrono::seconds duration);

/// Parses a shorthand duration such as "30s", "15m", "6h", "7d" or "2w".
/// Throws Error(Input) on anything else.
std::chrono::seconds parse_duration(std::string_view text);

/// "6 hours", "1 day", "90 seconds".
std::string humanize_duration(std::chrono::seconds duration);

}  // namespace promnl
