// SPDX-License-Identifier: Apache-2.0
#include "client_suite.hpp"

#include <sstream>

#include "promnl/errors.hpp"
#include "test_support.hpp"

namespace promnl::testing {

namespace {

using std::chrono::seconds;
using std::chrono::sys_seconds;

class Recorder {
 public:
  explicit Recorder(SuiteOutcome& out) : out_(out) {}

  void expect(bool ok, const std::string& what) {
    ++out_.checks;
    if (!ok) out_.failures.push_back(what);
  }

  template <class Fn, class Check>
  void expect_throw(const std::string& what, Fn&& fn, Check&& check) {
    ++out_.checks;
    try {
      fn();
      out_.failures.push_back(what + ": no exception");
    } catch (const Error& e) {
      if (!check(e)) out_.failures.push_back(what + ": wrong error: " + e.what());
    } catch (const std::exception& e) {
      out_.failures.push_back(what + ": foreign exception: " + e.what());
    }
  }

 private:
  SuiteOutcome& out_;
};

const sys_seconds kAt{seconds{kNow}};

}  // namespace

SuiteOutcome run_client_interface_suite(const ClientFactory& make) {
  SuiteOutcome out;
  Recorder r(out);
  try {
    // metric names
    {
      const auto names = make(test_fixture("prometheus_small"))->list_metric_names();
      r.expect(names == std::vector<std::string>{"etcd_server_has_leader", "go_goroutines", "node_load1",
                                                 "process_cpu_seconds_total", "up"},
               "five names round-trip");
      r.expect(make(test_fixture("prometheus_empty"))->list_metric_names().empty(), "empty name list");
      r.expect_throw(
          "error status surfaces", [&] { make(test_fixture("prometheus_error"))->list_metric_names(); },
          [](const Error& e) {
            const auto* api = dynamic_cast<const ApiError*>(&e);
            return api && e.kind() == ErrorKind::Api && api->http_status() == 422 && api->error_type() == "internal" &&
                   std::string(e.what()) == "query processing would load too many samples into memory";
          });
    }

    auto client = make(prometheus_fixtures());
    r.expect(client->list_metric_names().size() == 103, "shipped fixture lists 103 names");

    // metadata
    {
      const auto foo = client->fetch_metadata("foo_total");
      r.expect(foo.type == MetricType::Counter && foo.help == "Total foo events.", "counter metadata");
      const auto unknown = client->fetch_metadata("definitely_not_there");
      r.expect(!unknown.type && unknown.help.empty() && unknown.name == "definitely_not_there", "absent metadata");
      const auto hist = client->fetch_metadata("payments_checkout_latency_seconds");
      r.expect(hist.type == MetricType::Histogram && !hist.help.empty(), "histogram metadata");
    }

    // instant queries
    {
      const auto up = client->instant_query("up", kAt);
      r.expect(up.result_type == ResultType::Vector && up.series.size() == 2, "up is a two-series vector");
      r.expect(!up.series.empty() && up.series[0].labels.at("job") == "prometheus" &&
                   up.series[0].samples.size() == 1 && up.series[0].samples[0].value == 1.0,
               "up series decoded");
      const auto one = client->instant_query("1", kAt);
      r.expect(one.result_type == ResultType::Scalar && one.series.size() == 1 &&
                   one.series[0].samples[0].value == 1.0,
               "scalar literal");
      r.expect_throw(
          "parse error is a query error", [&] { client->instant_query("sum(rate(foo[5m])", kAt); },
          [](const Error& e) {
            const auto* api = dynamic_cast<const ApiError*>(&e);
            return api && e.kind() == ErrorKind::Query && api->http_status() == 400 && api->error_type() == "bad_data" &&
                   std::string(e.what()) == "1:18: parse error: unclosed left parenthesis";
          });
    }

    // range queries
    {
      const auto m = client->range_query("rate(node_cpu_seconds_total[5m])", kAt - seconds{3600}, kAt, seconds{900});
      bool intact = m.result_type == ResultType::Matrix && m.series.size() == 2;
      for (const auto& s : m.series) {
        intact = intact && s.samples.size() == 4;
        for (std::size_t i = 1; i < s.samples.size(); ++i) {
          intact = intact && s.samples[i - 1].timestamp < s.samples[i].timestamp;
        }
      }
      r.expect(intact, "2x4 matrix decoded intact");

      const auto coarse =
          client->range_query("rate(node_cpu_seconds_total[5m])", kAt - seconds{3600}, kAt, seconds{7200});
      bool single = coarse.series.size() == 2;
      for (const auto& s : coarse.series) single = single && s.samples.size() == 1;
      r.expect(single, "step wider than the window gives one sample per series");

      const auto before = client->counts().range;
      r.expect_throw(
          "start == end rejected", [&] { client->range_query("up", kAt, kAt, seconds{15}); },
          [](const Error& e) { return e.kind() == ErrorKind::Input; });
      r.expect_throw(
          "zero step rejected", [&] { client->range_query("up", kAt - seconds{60}, kAt, seconds{0}); },
          [](const Error& e) { return e.kind() == ErrorKind::Input; });
      r.expect(client->counts().range == before, "invalid range makes no request");
    }

    // counters
    {
      client->reset_counts();
      client->list_metric_names();
      client->fetch_metadata("foo_total");
      client->fetch_metadata("foo_total");
      client->instant_query("up", kAt);
      const auto c = client->counts();
      r.expect(c.names == 1 && c.metadata == 2 && c.instant == 1 && c.range == 0, "call counters");
    }
  } catch (const std::exception& e) {
    out.failures.push_back(std::string("suite aborted: ") + e.what());
  }
  return out;
}

}  // namespace promnl::testing
