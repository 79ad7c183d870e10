// SPDX-License-Identifier: Apache-2.0
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>

#include "client_suite.hpp"
#include "doctest.h"
#include "fake_prometheus.hpp"
#include "promnl/errors.hpp"
#include "promnl/prom_client.hpp"
#include "test_support.hpp"

using namespace promnl;
using namespace promnl::testing;
using std::chrono::seconds;

namespace {

void report(const SuiteOutcome& outcome) {
  for (const auto& f : outcome.failures) FAIL_CHECK(f);
  CHECK(outcome.checks == 17);
}

}  // namespace

TEST_CASE("fixture client passes the interface suite") {
  report(run_client_interface_suite([](const std::filesystem::path& dir) { return PromClient::fixtures(dir); }));
}

TEST_CASE("HTTP client passes the same suite against recorded responses") {
  std::map<std::filesystem::path, std::unique_ptr<FakePrometheus>> servers;
  report(run_client_interface_suite([&](const std::filesystem::path& dir) {
    auto& server = servers[dir];
    if (!server) server = std::make_unique<FakePrometheus>(dir);
    return PromClient::http({server->url(), "", std::chrono::milliseconds(5000)});
  }));
}

TEST_CASE("bearer token is sent") {
  FakePrometheus server(test_fixture("prometheus_small"));
  const auto client = PromClient::http({server.url(), "s3cret", std::chrono::milliseconds(5000)});
  client->list_metric_names();
  CHECK(server.last_authorization() == "Bearer s3cret");
}

TEST_CASE("deadline is enforced") {
  FakePrometheus slow(test_fixture("prometheus_small"), std::chrono::milliseconds(1500));
  const auto client = PromClient::http({slow.url(), "", std::chrono::milliseconds(200)});
  const auto t0 = std::chrono::steady_clock::now();
  try {
    client->list_metric_names();
    FAIL("expected transport error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Transport);
  }
  CHECK(std::chrono::steady_clock::now() - t0 < std::chrono::milliseconds(1400));
}

TEST_CASE("unreachable endpoint is a transport error") {
  int port = 0;
  {
    FakePrometheus closed(test_fixture("prometheus_small"));
    port = closed.port();
  }
  const auto client = PromClient::http({"http://127.0.0.1:" + std::to_string(port), "", std::chrono::milliseconds(500)});
  try {
    client->list_metric_names();
    FAIL("expected transport error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Transport);
  }
}

TEST_CASE("HttpTransport rejects non-http URLs") {
  for (const char* url : {"https://prom.example:9090", "prom:9090", ""}) {
    CAPTURE(url);
    try {
      HttpTransport t({url, "", std::chrono::milliseconds(100)});
      FAIL("expected config error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Config);
    }
  }
}

TEST_CASE("fixture keys ignore parameter order") {
  CHECK(FixtureTransport::request_key("/api/v1/query", {{"time", "1"}, {"query", "up"}}) ==
        FixtureTransport::request_key("/api/v1/query", {{"query", "up"}, {"time", "1"}}));
  CHECK(FixtureTransport::request_key("/a", {{"q", "x"}}) != FixtureTransport::request_key("/b", {{"q", "x"}}));
}

TEST_CASE("unmatched fixture request answers like Prometheus") {
  FixtureTransport t(prometheus_fixtures());
  CHECK(t.exchange_count() > 5);
  const auto r = t.get("/api/v1/query", {{"query", "nothing_recorded"}, {"time", "1"}});
  CHECK(r.status == 404);
  const auto body = nlohmann::json::parse(r.body);
  CHECK(body.at("status") == "error");
}

TEST_CASE("missing fixture directory") {
  try {
    FixtureTransport t(test_fixture("does_not_exist"));
    FAIL("expected config error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
  }
}

TEST_CASE("decode_query_data") {
  const auto matrix = nlohmann::json::parse(R"({"resultType":"matrix","result":[
      {"metric":{"a":"1"},"values":[[20,"2"],[10,"1"],[30,"NaN"]]}]})");
  const auto r = decode_query_data(matrix);
  REQUIRE(r.series.size() == 1);
  REQUIRE(r.series[0].samples.size() == 3);
  CHECK(r.series[0].samples[0].timestamp == 10);
  CHECK(r.series[0].samples[1].value == 2.0);
  CHECK(std::isnan(r.series[0].samples[2].value));
  CHECK(to_json(r).at("result_type") == "matrix");
  CHECK_THROWS_AS(decode_query_data(nlohmann::json::parse(R"({"resultType":"streams","result":[]})")), Error);
}

TEST_CASE("client is safe to share between threads") {
  const auto client = PromClient::fixtures(prometheus_fixtures());
  std::vector<std::thread> pool;
  for (int i = 0; i < 4; ++i) {
    pool.emplace_back([&] {
      for (int j = 0; j < 50; ++j) client->instant_query("up", std::chrono::sys_seconds{seconds{kNow}});
    });
  }
  for (auto& t : pool) t.join();
  CHECK(client->counts().instant == 200);
}
