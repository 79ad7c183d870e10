// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"
#include "oracles.hpp"
#include "promnl/errors.hpp"
#include "promnl/intent.hpp"
#include "promnl/promql.hpp"
#include "test_support.hpp"

using namespace promnl;
using namespace promnl::testing;

namespace {

TimeRangeInfo window(const std::string& rate) {
  TimeRangeInfo t;
  t.rate_syntax = rate;
  t.end = std::chrono::sys_seconds{std::chrono::seconds{kNow}};
  t.duration = parse_duration(rate.substr(1, rate.size() - 2));
  t.start = t.end - t.duration;
  return t;
}

IntentResult intent(Intent i, std::set<std::string> entities = {}) {
  IntentResult r;
  r.intent = i;
  r.entities = std::move(entities);
  return r;
}

std::string gen(const std::string& name, MetricType type, const IntentResult& ir, const std::string& rate) {
  return generate(make_entry({name, "gpu_ai", type}), ir, window(rate)).promql;
}

}  // namespace

TEST_CASE("worked example queries") {
  CHECK(gen("vllm:time_to_first_token_seconds", MetricType::Histogram, intent(Intent::CurrentValue), "[1h]") ==
        "histogram_quantile(0.95, sum(rate(vllm:time_to_first_token_seconds_bucket[1h])) by (le))");
  CHECK(gen("DCGM_FI_DEV_GPU_TEMP", MetricType::Gauge, intent(Intent::Trend), "[6h]") ==
        "avg_over_time(DCGM_FI_DEV_GPU_TEMP[6h])");
  CHECK(gen("vllm:generation_tokens_total", MetricType::Counter, intent(Intent::Comparison, {"model"}), "[1d]") ==
        "sum by (model_name)(rate(vllm:generation_tokens_total[1d]))");
  CHECK(gen("foo_total", MetricType::Counter, intent(Intent::TopN), "[5m]") == "topk(5, rate(foo_total[5m]))");
}

TEST_CASE("template grid") {
  const std::string M = "m";
  struct Cell {
    Intent intent;
    MetricType type;
    const char* expected;
  };
  const std::vector<Cell> cells = {
      {Intent::CurrentValue, MetricType::Counter, "rate(m[5m])"},
      {Intent::CurrentValue, MetricType::Gauge, "m"},
      {Intent::CurrentValue, MetricType::Summary, "m{quantile=\"0.95\"}"},
      {Intent::Count, MetricType::Gauge, "count(m)"},
      {Intent::Count, MetricType::Histogram, "count(m_count)"},
      {Intent::Average, MetricType::Counter, "avg(rate(m[5m]))"},
      {Intent::Average, MetricType::Gauge, "avg(m)"},
      {Intent::Average, MetricType::Histogram, "sum(rate(m_sum[5m])) / sum(rate(m_count[5m]))"},
      {Intent::Percentile, MetricType::Counter, "quantile(0.95, rate(m[5m]))"},
      {Intent::Percentile, MetricType::Gauge, "quantile_over_time(0.95, m[5m])"},
      {Intent::Percentile, MetricType::Histogram, "histogram_quantile(0.95, sum(rate(m_bucket[5m])) by (le))"},
      {Intent::TopN, MetricType::Gauge, "topk(5, m)"},
      {Intent::TopN, MetricType::Histogram,
       "topk(5, histogram_quantile(0.95, sum by (instance, le)(rate(m_bucket[5m]))))"},
      {Intent::Comparison, MetricType::Gauge, "avg by (instance)(m)"},
      {Intent::Comparison, MetricType::Histogram, "histogram_quantile(0.95, sum by (instance, le)(rate(m_bucket[5m])))"},
      {Intent::Trend, MetricType::Counter, "rate(m[5m])"},
      {Intent::Trend, MetricType::Summary, "avg_over_time(m{quantile=\"0.95\"}[5m])"},
      {Intent::Rate, MetricType::Counter, "sum(rate(m[5m]))"},
      {Intent::Rate, MetricType::Gauge, "deriv(m[5m])"},
      {Intent::Rate, MetricType::Summary, "sum(rate(m_count[5m]))"},
  };
  for (const auto& c : cells) {
    CAPTURE(c.expected);
    CHECK(gen(M, c.type, intent(c.intent), "[5m]") == c.expected);
  }
}

TEST_CASE("every cell is well formed and carries the rate syntax") {
  for (const auto i : {Intent::CurrentValue, Intent::Count, Intent::Average, Intent::Percentile, Intent::TopN,
                       Intent::Comparison, Intent::Trend, Intent::Rate}) {
    for (const auto t : {MetricType::Counter, MetricType::Gauge, MetricType::Histogram, MetricType::Summary}) {
      for (const std::string r : {"[5m]", "[6h]", "[21d]"}) {
        const auto q = generate(make_entry({"ns_sub_metric", "gpu_ai", t}), intent(i), window(r));
        CAPTURE(q.promql);
        CHECK(check_promql(q.promql).ok());
        CHECK(q.repairs.empty());
        CHECK(q.template_id == std::string(to_string(i)) + "/" + std::string(to_string(t)));
        if (q.promql.find('[') != std::string::npos) CHECK(q.promql.find(r) != std::string::npos);
        if (t == MetricType::Histogram && q.promql.find("histogram_quantile") != std::string::npos) {
          CHECK(q.promql.find("ns_sub_metric_bucket") != std::string::npos);
          CHECK(q.promql.find("le)") != std::string::npos);
        }
      }
    }
  }
}

TEST_CASE("quantile and top-n overrides") {
  auto p99 = intent(Intent::Percentile);
  p99.quantile = 0.99;
  CHECK(gen("h", MetricType::Histogram, p99, "[5m]") == "histogram_quantile(0.99, sum(rate(h_bucket[5m])) by (le))");
  auto top3 = intent(Intent::TopN);
  top3.top_n = 3;
  CHECK(gen("g", MetricType::Gauge, top3, "[5m]") == "topk(3, g)");
}

TEST_CASE("infer_by_label") {
  const auto m = make_entry({"x", "gpu_ai"});
  CHECK(infer_by_label(intent(Intent::Comparison, {"model"}), m) == "model_name");
  CHECK(infer_by_label(intent(Intent::Comparison, {"node"}), m) == "node");
  CHECK(infer_by_label(intent(Intent::Comparison, {"pod"}), m) == "pod");
  CHECK(infer_by_label(intent(Intent::Comparison), m) == "instance");
  const auto across = detect_intent("compare memory across nodes", default_config().lexicon);
  CHECK(infer_by_label(across, m) == "node");
}

TEST_CASE("repair examples") {
  struct Case {
    const char* in;
    const char* rate;
    const char* out;
    std::vector<RepairKind> kinds;
  };
  const std::vector<Case> cases = {
      {R"(rate(foo{job="x",}[5m]))", "[5m]", R"(rate(foo{job="x"}[5m]))", {RepairKind::TrailingComma}},
      {"sum(rate(foo[5m])", "[5m]", "sum(rate(foo[5m]))", {RepairKind::ParenBalance}},
      {"foo[5m]", "[5m]", "rate(foo[5m])", {RepairKind::BareRangeWrapped}},
      {"rate(foo)", "[1h]", "rate(foo[1h])", {RepairKind::MissingRange}},
      {"sum(foo[5m])", "[5m]", "sum(rate(foo[5m]))", {RepairKind::BareRangeWrapped}},
      {"rate(sum(foo))", "[5m]", "rate(sum(foo)[5m:])", {RepairKind::MissingRange}},
      {"sum(rate(foo[5m])))", "[5m]", "sum(rate(foo[5m]))", {RepairKind::ParenBalance}},
      {R"(up{job="a",})", "[5m]", R"(up{job="a"})", {RepairKind::TrailingComma}},
      {R"(sum(irate(foo{a="b",)", "[2m]", R"(sum(irate(foo{a="b"}[2m])))",
       {RepairKind::ParenBalance, RepairKind::MissingRange, RepairKind::TrailingComma}},
      {"avg_over_time(foo[5m])", "[5m]", "avg_over_time(foo[5m])", {}},
      {R"q(count(up{job=")"}))q", "[5m]", R"q(count(up{job=")"}))q", {}},
  };
  const auto names = [](const std::vector<RepairKind>& kinds) {
    std::string s;
    for (const auto k : kinds) s += std::string(to_string(k)) + " ";
    return s;
  };
  for (const auto& c : cases) {
    CAPTURE(std::string(c.in));
    const auto r = repair(c.in, c.rate);
    CHECK(r.query == c.out);
    CHECK(names(r.repairs) == names(c.kinds));
  }
}

TEST_CASE("irreparable queries keep the original") {
  for (const char* bad : {"sum(rate(foo[5m]}) + 1", "rate()", R"(up{job="a)"}) {
    CAPTURE(bad);
    try {
      repair(bad, "[5m]");
      FAIL("expected RepairError");
    } catch (const RepairError& e) {
      CHECK(e.original() == bad);
      CHECK(e.kind() == ErrorKind::Repair);
    }
  }
  CHECK_THROWS_AS(repair("  ", "[5m]"), Error);
  CHECK_THROWS_AS(repair("foo", "5m"), Error);
}

TEST_CASE("check_promql") {
  CHECK(check_promql("histogram_quantile(0.95, sum(rate(m_bucket[5m])) by (le))").ok());
  CHECK_FALSE(check_promql("histogram_quantile(1.5, sum(rate(m_bucket[5m])) by (le))").ok());
  CHECK_FALSE(check_promql("sum(rate(foo[5m])").ok());
  CHECK_FALSE(check_promql("rate(foo)").ok());
  CHECK_FALSE(check_promql("foo[5m]").ok());
  CHECK_FALSE(check_promql(R"(foo{a="b",})").ok());
  CHECK(accepts_range_vector("quantile_over_time"));
  CHECK_FALSE(accepts_range_vector("sum"));
}

TEST_CASE("repair fuzz corpus") {
  const auto corpus = repair_corpus(10000, 17);
  REQUIRE(corpus.size() >= 10000);
  std::size_t repaired = 0;
  for (const auto& q : corpus) {
    CAPTURE(q);
    RepairResult r;
    try {
      r = repair(q, "[5m]");
    } catch (const RepairError& e) {
      FAIL_CHECK("unexpected RepairError: " << e.what());
      continue;
    }
    const auto shape = oracle::inspect(r.query);
    CHECK(shape.balanced);
    CHECK_FALSE(shape.trailing_comma);
    CHECK_FALSE(shape.bare_top_level_range);
    CHECK_FALSE(shape.rate_without_range);
    CHECK(check_promql(r.query).ok());
    const auto again = repair(r.query, "[5m]");
    CHECK(again.query == r.query);
    CHECK(again.repairs.empty());
    if (!r.repairs.empty()) ++repaired;
  }
  CHECK(repaired > corpus.size() / 2);
}
