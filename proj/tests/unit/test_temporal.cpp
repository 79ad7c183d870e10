// SPDX-License-Identifier: Apache-2.0
#include <chrono>
#include <string>
#include <vector>

#include "doctest.h"
#include "promnl/errors.hpp"
#include "promnl/temporal.hpp"
#include "temporal_table.hpp"
#include "test_support.hpp"

using namespace promnl;
using namespace promnl::testing;
using std::chrono::seconds;
using std::chrono::sys_seconds;

namespace {

const sys_seconds kAt{seconds{kNow}};
const auto& kRows = temporal_table();

}  // namespace

TEST_CASE("resolution table") {
  REQUIRE(kRows.size() >= 25);
  for (const auto& row : kRows) {
    CAPTURE(row.expression);
    const auto t = resolve_time(row.expression, std::nullopt, kAt, seconds{3600});
    CHECK(t.duration.count() == row.duration);
    CHECK(t.rate_syntax == row.rate);
    CHECK(t.strategy == row.strategy);
    CHECK((t.end - t.start).count() == t.duration.count());
    CHECK(t.start < t.end);
    if (row.start != 0) {
      CHECK(t.start.time_since_epoch().count() == row.start);
    } else {
      CHECK(t.end == kAt);
    }
  }
}

TEST_CASE("explicit ranges win and use threshold syntax") {
  const auto two_h = resolve_time("last 6 hours", ExplicitRange{kAt - seconds{7200}, kAt}, kAt, seconds{3600});
  CHECK(two_h.rate_syntax == "[2h]");
  CHECK(two_h.strategy == TimeStrategy::Explicit);
  CHECK(resolve_time("", ExplicitRange{kAt - seconds{900}, kAt}, kAt, seconds{3600}).rate_syntax == "[15m]");
  CHECK(resolve_time("", ExplicitRange{kAt - seconds{3 * kDay}, kAt}, kAt, seconds{3600}).rate_syntax == "[3d]");
  CHECK(resolve_time("", ExplicitRange{kAt - seconds{kDay}, kAt}, kAt, seconds{3600}).rate_syntax == "[24h]");
}

TEST_CASE("input errors") {
  auto expect_input = [](auto&& fn) {
    try {
      fn();
      FAIL("expected input error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Input);
    }
  };
  expect_input([] { resolve_time("", ExplicitRange{kAt, kAt}, kAt, seconds{3600}); });
  expect_input([] { resolve_time("", ExplicitRange{kAt, kAt - seconds{1}}, kAt, seconds{3600}); });
  expect_input([] { resolve_time("", std::nullopt, sys_seconds{}, seconds{3600}); });
  expect_input([] { resolve_time("", std::nullopt, kAt, seconds{0}); });
  expect_input([] { rate_syntax_for(seconds{0}); });
  expect_input([] { parse_duration("6 hours"); });
}

TEST_CASE("default window is configurable") {
  const auto t = resolve_time("gpu memory", std::nullopt, kAt, seconds{900});
  CHECK(t.rate_syntax == "[15m]");
  CHECK(t.strategy == TimeStrategy::Default);
}

TEST_CASE("calendar-day reading of yesterday") {
  const auto t = resolve_time("yesterday", std::nullopt, kAt, seconds{3600}, YesterdayMode::CalendarDay);
  CHECK(t.start.time_since_epoch().count() == kMidnight - kDay);
  CHECK(t.end.time_since_epoch().count() == kMidnight);
  CHECK(t.rate_syntax == "[1d]");
}

TEST_CASE("rate_syntax_for thresholds") {
  CHECK(rate_syntax_for(seconds{900}) == "[15m]");
  CHECK(rate_syntax_for(seconds{61}) == "[2m]");
  CHECK(rate_syntax_for(seconds{3599}) == "[60m]");
  CHECK(rate_syntax_for(seconds{3600}) == "[1h]");
  CHECK(rate_syntax_for(seconds{21600}) == "[6h]");
  CHECK(rate_syntax_for(seconds{48 * 3600 - 1}) == "[48h]");
  CHECK(rate_syntax_for(seconds{48 * 3600}) == "[2d]");
  CHECK(rate_syntax_for(seconds{1814400}) == "[21d]");
}

TEST_CASE("rate_syntax_for never gets finer as windows grow") {
  auto rank = [](const std::string& r) {
    switch (r[r.size() - 2]) {
      case 'm': return 0;
      case 'h': return 1;
      default: return 2;
    }
  };
  int prev = 0;
  for (std::int64_t d = 1; d <= 10 * kDay; d += 37) {
    const int r = rank(rate_syntax_for(seconds{d}));
    CHECK(r >= prev);
    prev = r;
  }
}

TEST_CASE("shorthand round trip") {
  for (int n = 1; n <= 60; ++n) {
    for (const char unit : {'m', 'h', 'd'}) {
      const auto s = std::to_string(n) + unit;
      CHECK(resolve_time(s, std::nullopt, kAt, seconds{3600}).rate_syntax == "[" + s + "]");
    }
  }
}

TEST_CASE("earlier strategies win in composite expressions") {
  CHECK(resolve_time("15m yesterday", std::nullopt, kAt, seconds{3600}).strategy == TimeStrategy::Shorthand);
  CHECK(resolve_time("last 3 hours this week", std::nullopt, kAt, seconds{3600}).strategy == TimeStrategy::NlDuration);
  CHECK(resolve_time("this month on 2025-10-01", std::nullopt, kAt, seconds{3600}).strategy == TimeStrategy::Calendar);
}

TEST_CASE("resolution is fast") {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t sink = 0;
  constexpr int kIterations = 10000;
  for (int i = 0; i < kIterations; ++i) {
    const auto& row = kRows[static_cast<std::size_t>(i) % kRows.size()];
    sink += resolve_time(row.expression, std::nullopt, kAt, seconds{3600}).rate_syntax.size();
  }
  const auto per_call =
      std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count() / kIterations;
  CHECK(sink > 0);
  CHECK(per_call < 1000.0);
}

TEST_CASE("parse_duration and humanize_duration") {
  CHECK(parse_duration("30s") == seconds{30});
  CHECK(parse_duration("2w") == seconds{1209600});
  CHECK(humanize_duration(seconds{21600}) == "6 hours");
  CHECK(humanize_duration(seconds{86400}) == "1 day");
}
