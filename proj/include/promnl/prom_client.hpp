// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"
#include "promnl/catalog.hpp"

namespace promnl {

struct MetricMetadata {
  std::string name;
  std::optional<MetricType> type;  // nullopt is "unknown"
  std::string help;

  bool operator==(const MetricMetadata&) const = default;
};

enum class ResultType { Vector, Matrix, Scalar };

std::string_view to_string(ResultType t) noexcept;

struct Sample {
  double timestamp = 0;
  double value = 0;

  bool operator==(const Sample&) const = default;
};

struct Series {
  std::map<std::string, std::string> labels;
  std::vector<Sample> samples;  // timestamp ascending

  bool operator==(const Series&) const = default;
};

struct QueryResult {
  ResultType result_type = ResultType::Vector;
  std::vector<Series> series;
  std::vector<std::string> warnings;

  bool operator==(const QueryResult&) const = default;
};

using QueryParams = std::vector<std::pair<std::string, std::string>>;

struct HttpResponse {
  int status = 0;
  std::string body;
};

/// One GET against the Prometheus HTTP API. Implementations throw
/// Error(Transport) when no response was obtained.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpResponse get(const std::string& path, const QueryParams& params) = 0;
};

struct HttpOptions {
  std::string base_url;  // http://host:port[/prefix]
  std::string bearer_token;
  std::chrono::milliseconds timeout{10000};
};

class HttpTransport final : public Transport {
 public:
  /// Throws Error(Config) for URLs that are not plain http.
  explicit HttpTransport(HttpOptions options);
  HttpResponse get(const std::string& path, const QueryParams& params) override;

 private:
  HttpOptions options_;
  std::string host_;
  int port_ = 80;
  std::string prefix_;
};

/// Replays recorded responses from a directory of JSON files. Each file holds
/// one exchange or an array of them:
///   {"request": {"path": "/api/v1/query", "params": {"query": "up"}},
///    "status": 200, "body": {...}}
/// Requests match on path plus the sorted parameter set; an exchange without
/// "params" answers any request to its path that has no exact match.
class FixtureTransport final : public Transport {
 public:
  /// Throws Error(Config) when the directory is missing or a file is malformed.
  explicit FixtureTransport(const std::filesystem::path& dir);
  HttpResponse get(const std::string& path, const QueryParams& params) override;

  std::size_t exchange_count() const noexcept { return exact_.size() + wildcard_.size(); }

  static std::string request_key(const std::string& path, QueryParams params);

 private:
  void add_exchange(const nlohmann::json& exchange, const std::string& origin);

  std::unordered_map<std::string, HttpResponse> exact_;
  std::unordered_map<std::string, HttpResponse> wildcard_;
};

struct CallCounts {
  std::uint64_t names = 0;
  std::uint64_t metadata = 0;
  std::uint64_t instant = 0;
  std::uint64_t range = 0;
};

class PromClient {
 public:
  explicit PromClient(std::shared_ptr<Transport> transport);

  static std::shared_ptr<PromClient> http(HttpOptions options);
  static std::shared_ptr<PromClient> fixtures(const std::filesystem::path& dir);

  std::vector<std::string> list_metric_names();
  MetricMetadata fetch_metadata(const std::string& name);
  QueryResult instant_query(const std::string& promql, std::chrono::sys_seconds at);
  /// Throws Error(Input) before any request when start >= end or step <= 0.
  QueryResult range_query(const std::string& promql, std::chrono::sys_seconds start, std::chrono::sys_seconds end,
                          std::chrono::seconds step);

  CallCounts counts() const noexcept;
  void reset_counts() noexcept;

 private:
  nlohmann::json call(const std::string& path, const QueryParams& params, bool is_query);

  std::shared_ptr<Transport> transport_;
  std::atomic<std::uint64_t> names_{0};
  std::atomic<std::uint64_t> metadata_{0};
  std::atomic<std::uint64_t> instant_{0};
  std::atomic<std::uint64_t> range_{0};
};

/// Decodes the "data" object of a query response.
QueryResult decode_query_data(const nlohmann::json& data);

nlohmann::json to_json(const QueryResult& r);
nlohmann::json to_json(const MetricMetadata& m);

}  // namespace promnl
