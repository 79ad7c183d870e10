// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cctype>

#include "doctest.h"
#include "promnl/errors.hpp"
#include "promnl/intent.hpp"
#include "test_support.hpp"

using namespace promnl;
using namespace promnl::testing;

namespace {

IntentResult detect(std::string_view q) { return detect_intent(q, default_config().lexicon); }

}  // namespace

TEST_CASE("worked example questions") {
  const auto ttft = detect("What is the TTFT for my vLLM deployment?");
  CHECK(ttft.intent == Intent::CurrentValue);
  CHECK(ttft.domain_terms.count("ttft") == 1);
  CHECK(ttft.domain_terms.count("vllm") == 1);
  CHECK(std::find(ttft.matched_triggers.begin(), ttft.matched_triggers.end(), "what is") != ttft.matched_triggers.end());

  const auto temp = detect("How has GPU temperature changed over the last 6 hours?");
  CHECK(temp.intent == Intent::Trend);
  CHECK(temp.measurements.count(Measurement::Temperature) == 1);

  const auto cmp = detect("Compare token throughput across models since yesterday");
  CHECK(cmp.intent == Intent::Comparison);
  CHECK(cmp.entities.count("model") == 1);
  CHECK(cmp.measurements.count(Measurement::Tokens) == 1);

  CHECK(detect("how many pods are running").intent == Intent::Count);
}

TEST_CASE("one row per intent") {
  CHECK(detect("current GPU memory").intent == Intent::CurrentValue);
  CHECK(detect("number of nodes").intent == Intent::Count);
  CHECK(detect("average pod cpu").intent == Intent::Average);
  CHECK(detect("p99 request latency").intent == Intent::Percentile);
  CHECK(detect("top 3 pods by memory").intent == Intent::TopN);
  CHECK(detect("prefill versus decode time").intent == Intent::Comparison);
  CHECK(detect("is gpu power increasing").intent == Intent::Trend);
  CHECK(detect("requests per second on the api server").intent == Intent::Rate);
  CHECK(detect("gpu power").intent == Intent::CurrentValue);
}

TEST_CASE("precedence between co-triggered intents") {
  CHECK(detect("compare throughput").intent == Intent::Comparison);
  CHECK(detect("top pods by p95 latency").intent == Intent::Percentile);
  CHECK(detect("throughput over time").intent == Intent::Rate);
  CHECK(detect("what is the average memory").intent == Intent::Average);
  CHECK(detect("how many errors over the last hour").intent == Intent::Trend);
}

TEST_CASE("quantile and top-n extraction") {
  CHECK(detect("p99 latency").quantile == doctest::Approx(0.99));
  CHECK(detect("median latency").quantile == doctest::Approx(0.5));
  CHECK_FALSE(detect("latency").quantile.has_value());
  CHECK(detect("top 3 pods").top_n == 3);
  CHECK(detect("top three pods").top_n == 3);
  CHECK_FALSE(detect("top pods").top_n.has_value());
}

TEST_CASE("case and whitespace do not matter") {
  for (const std::string q : {"How has GPU temperature changed over the last 6 hours?",
                              "Compare token throughput across models since yesterday",
                              "What is the TTFT for my vLLM deployment?"}) {
    std::string upper = q;
    std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
    CHECK(detect(upper) == detect(q));
    CHECK(detect("   " + q + "\t\n") == detect(q));
  }
}

TEST_CASE("whole-word matching") {
  // "topology" must not trigger top_n, "nowhere" must not trigger current_value via "now"
  const auto r = detect("gpu topology nowhere");
  CHECK(r.intent == Intent::CurrentValue);
  CHECK(r.matched_triggers.empty());
}

TEST_CASE("blank question is an input error") {
  for (const char* q : {"", "   ", "\t\n"}) {
    try {
      detect(q);
      FAIL("expected input error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Input);
    }
  }
}
