// SPDX-License-Identifier: Apache-2.0
#include "promnl/temporal.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <vector>

#include "promnl/errors.hpp"
#include "promnl/text.hpp"

namespace promnl {

using namespace std::chrono;

namespace {

constexpr std::int64_t kMinute = 60;
constexpr std::int64_t kHour = 3600;
constexpr std::int64_t kDay = 86400;

// A duration as written: count plus the range-selector unit it maps to.
struct SpokenDuration {
  std::int64_t count = 0;
  char unit = 'h';  // s, m, h, d
  std::int64_t seconds = 0;
  std::string text;
};

struct UnitWord {
  std::string_view word;
  std::int64_t seconds;
  char selector_unit;
  std::int64_t selector_multiplier;  // weeks/months/years are expressed in days
  std::string_view singular;
};

constexpr std::array<UnitWord, 20> kUnitWords{{
    {"second", 1, 's', 1, "second"},       {"seconds", 1, 's', 1, "second"},
    {"sec", 1, 's', 1, "second"},          {"secs", 1, 's', 1, "second"},
    {"minute", kMinute, 'm', 1, "minute"}, {"minutes", kMinute, 'm', 1, "minute"},
    {"min", kMinute, 'm', 1, "minute"},    {"mins", kMinute, 'm', 1, "minute"},
    {"hour", kHour, 'h', 1, "hour"},       {"hours", kHour, 'h', 1, "hour"},
    {"hr", kHour, 'h', 1, "hour"},         {"hrs", kHour, 'h', 1, "hour"},
    {"day", kDay, 'd', 1, "day"},          {"days", kDay, 'd', 1, "day"},
    {"week", 7 * kDay, 'd', 7, "week"},    {"weeks", 7 * kDay, 'd', 7, "week"},
    {"month", 30 * kDay, 'd', 30, "month"}, {"months", 30 * kDay, 'd', 30, "month"},
    {"year", 365 * kDay, 'd', 365, "year"}, {"years", 365 * kDay, 'd', 365, "year"},
}};

constexpr std::array<std::string_view, 13> kNumberWords{
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "eleven", "twelve"};

constexpr std::array<std::string_view, 12> kMonthNames{"january", "february", "march",     "april",   "may",      "june",
                                                       "july",    "august",   "september", "october", "november", "december"};
constexpr std::array<std::string_view, 12> kMonthAbbrev{"jan", "feb", "mar", "apr", "", "jun",
                                                        "jul", "aug", "sep", "oct", "nov", "dec"};

constexpr std::array<std::string_view, 7> kWeekdays{"sunday",   "monday", "tuesday", "wednesday",
                                                    "thursday", "friday", "saturday"};

const UnitWord* find_unit(std::string_view w) {
  for (const auto& u : kUnitWords) {
    if (u.word == w) return &u;
  }
  return nullptr;
}

std::optional<std::int64_t> parse_uint(std::string_view w) {
  if (w.empty() || w.size() > 9) return std::nullopt;
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
  if (ec != std::errc{} || ptr != w.data() + w.size()) return std::nullopt;
  return v;
}

std::optional<std::int64_t> parse_count(std::string_view w) {
  if (w == "a" || w == "an") return 1;
  for (std::size_t i = 0; i < kNumberWords.size(); ++i) {
    if (kNumberWords[i] == w) return static_cast<std::int64_t>(i);
  }
  return parse_uint(w);
}

// "14th" -> 14
std::optional<unsigned> parse_day_number(std::string_view w) {
  for (std::string_view suffix : {"st", "nd", "rd", "th"}) {
    if (w.size() > suffix.size() && w.substr(w.size() - suffix.size()) == suffix) {
      w.remove_suffix(suffix.size());
      break;
    }
  }
  if (w.empty() || w.size() > 2) return std::nullopt;
  const auto v = parse_uint(w);
  if (!v || *v < 1 || *v > 31) return std::nullopt;
  return static_cast<unsigned>(*v);
}

std::optional<int> parse_year(std::string_view w) {
  if (w.size() != 4) return std::nullopt;
  const auto v = parse_uint(w);
  if (!v || *v < 1970 || *v > 9999) return std::nullopt;
  return static_cast<int>(*v);
}

std::optional<unsigned> parse_month(std::string_view w) {
  for (std::size_t i = 0; i < kMonthNames.size(); ++i) {
    if (kMonthNames[i] == w || (!kMonthAbbrev[i].empty() && kMonthAbbrev[i] == w)) {
      return static_cast<unsigned>(i + 1);
    }
  }
  if (w == "sept") return 9u;
  return std::nullopt;
}

std::optional<unsigned> parse_weekday(std::string_view w) {
  for (std::size_t i = 0; i < kWeekdays.size(); ++i) {
    if (kWeekdays[i] == w) return static_cast<unsigned>(i);
  }
  return std::nullopt;
}

std::string plural(std::int64_t n, std::string_view singular) {
  std::string s = std::to_string(n) + " " + std::string(singular);
  if (n != 1) s += "s";
  return s;
}

// Lowercased tokens; keeps '-' and '/' inside tokens for dates and splits
// "6-hour" style compounds.
std::vector<std::string> tokenize(std::string_view question) {
  std::vector<std::string> raw;
  std::string cur;
  for (char c : question) {
    const auto uc = static_cast<unsigned char>(c);
    if (std::isalnum(uc) || c == '-' || c == '/') {
      cur.push_back(static_cast<char>(std::tolower(uc)));
    } else if (c == '\'') {
      continue;
    } else if (!cur.empty()) {
      raw.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) raw.push_back(std::move(cur));

  std::vector<std::string> out;
  for (auto& t : raw) {
    while (!t.empty() && (t.back() == '-' || t.back() == '/')) t.pop_back();
    while (!t.empty() && (t.front() == '-' || t.front() == '/')) t.erase(t.begin());
    if (t.empty()) continue;
    const auto dash = t.find('-');
    if (dash != std::string::npos && t.find('-', dash + 1) == std::string::npos && parse_uint(t.substr(0, dash)) &&
        find_unit(t.substr(dash + 1)) != nullptr) {
      out.push_back(t.substr(0, dash));
      out.push_back(t.substr(dash + 1));
      continue;
    }
    out.push_back(std::move(t));
  }
  return out;
}

TimeRangeInfo make_range(sys_seconds start, sys_seconds end, std::string rate, std::string text, TimeStrategy s) {
  TimeRangeInfo info;
  info.start = start;
  info.end = end;
  info.duration = end - start;
  info.rate_syntax = std::move(rate);
  info.duration_text = std::move(text);
  info.strategy = s;
  return info;
}

TimeRangeInfo window_ending_now(sys_seconds now, const SpokenDuration& d, TimeStrategy s) {
  std::string rate = "[" + std::to_string(d.count) + d.unit + "]";
  return make_range(now - seconds(d.seconds), now, std::move(rate), d.text, s);
}

// Derived windows get the threshold-based selector.
std::optional<TimeRangeInfo> derived_window(sys_seconds start, sys_seconds end, std::string text, TimeStrategy s) {
  if (end <= start) return std::nullopt;
  return make_range(start, end, rate_syntax_for(end - start), std::move(text), s);
}

std::optional<SpokenDuration> shorthand_token(std::string_view t) {
  if (t.size() < 2) return std::nullopt;
  const char u = t.back();
  const auto n = parse_uint(t.substr(0, t.size() - 1));
  if (!n || *n <= 0) return std::nullopt;
  SpokenDuration d;
  switch (u) {
    case 's': d = {*n, 's', *n, plural(*n, "second")}; break;
    case 'm': d = {*n, 'm', *n * kMinute, plural(*n, "minute")}; break;
    case 'h': d = {*n, 'h', *n * kHour, plural(*n, "hour")}; break;
    case 'd': d = {*n, 'd', *n * kDay, plural(*n, "day")}; break;
    case 'w': d = {*n * 7, 'd', *n * 7 * kDay, plural(*n, "week")}; break;
    default: return std::nullopt;
  }
  return d;
}

std::optional<SpokenDuration> spoken(std::int64_t count, const UnitWord& unit) {
  if (count <= 0) return std::nullopt;
  return SpokenDuration{count * unit.selector_multiplier, unit.selector_unit, count * unit.seconds,
                        plural(count, unit.singular)};
}

std::optional<TimeRangeInfo> try_shorthand(const std::vector<std::string>& tokens, sys_seconds now) {
  for (const auto& t : tokens) {
    if (const auto d = shorthand_token(t)) return window_ending_now(now, *d, TimeStrategy::Shorthand);
  }
  return std::nullopt;
}

std::optional<TimeRangeInfo> try_nl_duration(const std::vector<std::string>& tokens, sys_seconds now) {
  static constexpr std::array<std::string_view, 6> kLeads{"last", "past", "previous", "over", "within", "recent"};
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& t = tokens[i];
    // last|past|... [N] unit
    if (std::find(kLeads.begin(), kLeads.end(), t) != kLeads.end() && i + 1 < tokens.size()) {
      if (const auto* unit = find_unit(tokens[i + 1])) {
        if (const auto d = spoken(1, *unit)) return window_ending_now(now, *d, TimeStrategy::NlDuration);
      }
      if (i + 2 < tokens.size()) {
        const auto n = parse_count(tokens[i + 1]);
        const auto* unit = find_unit(tokens[i + 2]);
        if (n && unit != nullptr) {
          if (const auto d = spoken(*n, *unit)) return window_ending_now(now, *d, TimeStrategy::NlDuration);
        }
      }
    }
    // N unit ago
    if (i + 2 < tokens.size() && tokens[i + 2] == "ago") {
      const auto n = parse_count(t);
      const auto* unit = find_unit(tokens[i + 1]);
      if (n && unit != nullptr) {
        if (const auto d = spoken(*n, *unit)) return window_ending_now(now, *d, TimeStrategy::NlDuration);
      }
    }
  }
  return std::nullopt;
}

sys_days midnight(sys_seconds now) { return floor<days>(now); }

bool is_date_context(const std::vector<std::string>& tokens, std::size_t month_index) {
  // A day number right before or after the month makes it a specific date.
  if (month_index + 1 < tokens.size() && !parse_year(tokens[month_index + 1]) &&
      parse_day_number(tokens[month_index + 1])) {
    return true;
  }
  return month_index > 0 && parse_day_number(tokens[month_index - 1]).has_value();
}

// "may" is only a month next to a year or after a temporal preposition.
bool month_word_is_temporal(const std::vector<std::string>& tokens, std::size_t i) {
  if (tokens[i] != "may") return true;
  if (i + 1 < tokens.size() && parse_year(tokens[i + 1])) return true;
  if (i == 0) return false;
  const auto& prev = tokens[i - 1];
  return prev == "in" || prev == "during" || prev == "since" || prev == "for" || prev == "of" || prev == "last";
}

std::optional<TimeRangeInfo> try_calendar(const std::vector<std::string>& tokens, sys_seconds now,
                                          YesterdayMode mode) {
  const sys_days today = midnight(now);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& t = tokens[i];
    if (t == "yesterday") {
      if (mode == YesterdayMode::Rolling) {
        return make_range(now - seconds(kDay), now, "[1d]", "1 day", TimeStrategy::Calendar);
      }
      const sys_seconds end{today};
      return make_range(end - seconds(kDay), end, "[1d]", "1 day", TimeStrategy::Calendar);
    }
    if (t == "today") {
      if (auto r = derived_window(sys_seconds{today}, now, "today", TimeStrategy::Calendar)) return r;
      continue;
    }
    if (t == "this" && i + 1 < tokens.size()) {
      const auto& next = tokens[i + 1];
      sys_days start{};
      if (next == "week") {
        // Weeks start on Monday.
        const weekday wd{today};
        const auto back = (wd.c_encoding() + 6) % 7;
        start = today - days(back);
      } else if (next == "month") {
        const year_month_day ymd{today};
        start = sys_days{ymd.year() / ymd.month() / 1};
      } else if (next == "year") {
        const year_month_day ymd{today};
        start = sys_days{ymd.year() / January / 1};
      } else {
        continue;
      }
      if (auto r = derived_window(sys_seconds{start}, now, "this " + next, TimeStrategy::Calendar)) return r;
      continue;
    }
    if (const auto month_num = parse_month(t)) {
      if (!month_word_is_temporal(tokens, i) || is_date_context(tokens, i)) continue;
      const year_month_day now_ymd{today};
      const month m{*month_num};
      year y = now_ymd.year();
      if (i + 1 < tokens.size()) {
        if (const auto explicit_year = parse_year(tokens[i + 1])) {
          y = year{*explicit_year};
        } else if (m > now_ymd.month()) {
          y = y - years(1);
        }
      } else if (m > now_ymd.month()) {
        y = y - years(1);
      }
      const sys_seconds start{sys_days{y / m / 1}};
      sys_seconds end{sys_days{(y / m / 1) + months(1)}};
      const bool since = i > 0 && tokens[i - 1] == "since";
      if (since || end > now) end = now;
      std::string label = std::string(kMonthNames[*month_num - 1]) + " " + std::to_string(int(y));
      if (auto r = derived_window(start, end, std::move(label), TimeStrategy::Calendar)) return r;
    }
  }
  return std::nullopt;
}

std::optional<TimeRangeInfo> day_window(year_month_day date, sys_seconds now) {
  if (!date.ok()) return std::nullopt;
  const sys_seconds start{sys_days{date}};
  sys_seconds end = start + seconds(kDay);
  if (end > now) end = now;
  const auto label = std::to_string(int(date.year())) + "-" + (unsigned(date.month()) < 10 ? "0" : "") +
                     std::to_string(unsigned(date.month())) + "-" + (unsigned(date.day()) < 10 ? "0" : "") +
                     std::to_string(unsigned(date.day()));
  return derived_window(start, end, label, TimeStrategy::SpecificDate);
}

// Most recent occurrence of month/day that is not in the future.
year_month_day past_preferring(month m, day d, sys_seconds now) {
  const year_month_day today{midnight(now)};
  year_month_day candidate{today.year(), m, d};
  if (candidate.ok() && sys_days{candidate} > midnight(now)) candidate = year_month_day{today.year() - years(1), m, d};
  return candidate;
}

std::optional<TimeRangeInfo> try_specific_date(const std::vector<std::string>& tokens, sys_seconds now) {
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& t = tokens[i];

    // 2025-03-14
    if (t.size() == 10 && t[4] == '-' && t[7] == '-') {
      const auto y = parse_year(t.substr(0, 4));
      const auto mo = parse_uint(t.substr(5, 2));
      const auto d = parse_uint(t.substr(8, 2));
      if (y && mo && d) {
        const year_month_day ymd{year{*y}, month{unsigned(*mo)}, day{unsigned(*d)}};
        if (auto r = day_window(ymd, now)) return r;
      }
      continue;
    }

    // 3/14 or 3/14/2025 (month first)
    if (const auto slash = t.find('/'); slash != std::string::npos) {
      const auto second = t.find('/', slash + 1);
      const auto mo = parse_uint(t.substr(0, slash));
      const auto d = parse_uint(t.substr(slash + 1, second == std::string::npos ? std::string::npos : second - slash - 1));
      if (!mo || !d || *mo < 1 || *mo > 12 || *d < 1 || *d > 31) continue;
      year_month_day ymd{};
      if (second == std::string::npos) {
        ymd = past_preferring(month{unsigned(*mo)}, day{unsigned(*d)}, now);
      } else {
        const auto y = parse_year(t.substr(second + 1));
        if (!y) continue;
        ymd = year_month_day{year{*y}, month{unsigned(*mo)}, day{unsigned(*d)}};
      }
      if (auto r = day_window(ymd, now)) return r;
      continue;
    }

    // march 14 [2025] / 14 march [2025]
    if (const auto m = parse_month(t)) {
      std::optional<unsigned> d;
      std::size_t year_at = 0;
      if (i + 1 < tokens.size() && !parse_year(tokens[i + 1])) {
        d = parse_day_number(tokens[i + 1]);
        year_at = i + 2;
      }
      if (!d && i > 0) {
        d = parse_day_number(tokens[i - 1]);
        year_at = i + 1;
      }
      if (!d) continue;
      year_month_day ymd{};
      if (year_at < tokens.size() && parse_year(tokens[year_at])) {
        ymd = year_month_day{year{*parse_year(tokens[year_at])}, month{*m}, day{*d}};
      } else {
        ymd = past_preferring(month{*m}, day{*d}, now);
      }
      if (auto r = day_window(ymd, now)) return r;
      continue;
    }

    // [last|on] tuesday: the most recent such day before today
    if (const auto wd = parse_weekday(t)) {
      const sys_days today = midnight(now);
      const unsigned today_wd = weekday{today}.c_encoding();
      unsigned back = (today_wd + 7 - *wd) % 7;
      if (back == 0) back = 7;
      if (auto r = day_window(year_month_day{today - days(back)}, now)) return r;
    }
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(TimeStrategy s) noexcept {
  switch (s) {
    case TimeStrategy::Shorthand: return "shorthand";
    case TimeStrategy::NlDuration: return "nl_duration";
    case TimeStrategy::Calendar: return "calendar";
    case TimeStrategy::SpecificDate: return "specific_date";
    case TimeStrategy::Explicit: return "explicit";
    case TimeStrategy::Default: return "default";
  }
  return "default";
}

TemporalConfig TemporalConfig::from_json(const nlohmann::json& doc) {
  TemporalConfig cfg;
  if (const auto it = doc.find("default_window"); it != doc.end()) cfg.default_window = parse_duration(it->get<std::string>());
  if (const auto it = doc.find("yesterday_mode"); it != doc.end()) {
    const auto mode = it->get<std::string>();
    if (mode == "rolling") {
      cfg.yesterday_mode = YesterdayMode::Rolling;
    } else if (mode == "calendar") {
      cfg.yesterday_mode = YesterdayMode::CalendarDay;
    } else {
      throw Error(ErrorKind::Config, "temporal: yesterday_mode must be 'rolling' or 'calendar'");
    }
  }
  return cfg;
}

std::string rate_syntax_for(seconds duration) {
  const auto s = duration.count();
  if (s <= 0) throw Error(ErrorKind::Input, "rate window must be positive, got " + std::to_string(s) + "s");
  auto ceil_div = [](std::int64_t a, std::int64_t b) { return (a + b - 1) / b; };
  if (s < kHour) return "[" + std::to_string(ceil_div(s, kMinute)) + "m]";
  if (s < 48 * kHour) return "[" + std::to_string(ceil_div(s, kHour)) + "h]";
  return "[" + std::to_string(ceil_div(s, kDay)) + "d]";
}

seconds parse_duration(std::string_view text) {
  const auto t = text::to_lower(text::trim(text));
  if (const auto d = shorthand_token(t)) return seconds(d->seconds);
  throw Error(ErrorKind::Input, "not a duration: '" + std::string(text) + "'");
}

std::string humanize_duration(seconds duration) {
  const auto s = duration.count();
  if (s > 0 && s % kDay == 0) return plural(s / kDay, "day");
  if (s > 0 && s % kHour == 0) return plural(s / kHour, "hour");
  if (s > 0 && s % kMinute == 0) return plural(s / kMinute, "minute");
  return plural(s, "second");
}

TimeRangeInfo resolve_time(std::string_view question, std::optional<ExplicitRange> explicit_range, sys_seconds now,
                           seconds default_window, YesterdayMode yesterday_mode) {
  if (now.time_since_epoch().count() <= 0) throw Error(ErrorKind::Input, "now must be a positive unix timestamp");
  if (default_window.count() <= 0) throw Error(ErrorKind::Input, "default window must be positive");

  if (explicit_range) {
    if (explicit_range->start >= explicit_range->end) {
      throw Error(ErrorKind::Input, "explicit range start must be before end");
    }
    const auto d = explicit_range->end - explicit_range->start;
    return make_range(explicit_range->start, explicit_range->end, rate_syntax_for(d), humanize_duration(d),
                      TimeStrategy::Explicit);
  }

  const auto tokens = tokenize(question);
  if (auto r = try_shorthand(tokens, now)) return *r;
  if (auto r = try_nl_duration(tokens, now)) return *r;
  if (auto r = try_calendar(tokens, now, yesterday_mode)) return *r;
  if (auto r = try_specific_date(tokens, now)) return *r;

  return make_range(now - default_window, now, rate_syntax_for(default_window), humanize_duration(default_window),
                    TimeStrategy::Default);
}

}  // namespace promnl
