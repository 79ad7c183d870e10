// SPDX-License-Identifier: Apache-2.0
#include "promnl/prom_client.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "httplib.h"
#include "promnl/errors.hpp"

namespace promnl {

using nlohmann::json;

namespace {

std::string format_timestamp(std::int64_t seconds) { return std::to_string(seconds); }

double parse_sample_value(const json& v) {
  if (v.is_number()) return v.get<double>();
  const auto s = v.get<std::string>();
  return std::strtod(s.c_str(), nullptr);
}

Sample decode_sample(const json& pair) {
  if (!pair.is_array() || pair.size() != 2) throw Error(ErrorKind::Api, "malformed sample pair");
  return {pair[0].get<double>(), parse_sample_value(pair[1])};
}

std::map<std::string, std::string> decode_labels(const json& metric) {
  std::map<std::string, std::string> labels;
  if (metric.is_object()) {
    for (const auto& [k, v] : metric.items()) labels.emplace(k, v.get<std::string>());
  }
  return labels;
}

std::string param_value(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

}  // namespace

std::string_view to_string(ResultType t) noexcept {
  switch (t) {
    case ResultType::Vector: return "vector";
    case ResultType::Matrix: return "matrix";
    case ResultType::Scalar: return "scalar";
  }
  return "vector";
}

// --- HttpTransport -----------------------------------------------------------

HttpTransport::HttpTransport(HttpOptions options) : options_(std::move(options)) {
  std::string_view url = options_.base_url;
  constexpr std::string_view scheme = "http://";
  if (url.substr(0, scheme.size()) != scheme) {
    throw Error(ErrorKind::Config, "prometheus url must start with http:// (got '" + options_.base_url + "')");
  }
  url.remove_prefix(scheme.size());
  const auto slash = url.find('/');
  auto authority = url.substr(0, slash);
  if (slash != std::string_view::npos) {
    prefix_ = std::string(url.substr(slash));
    while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
  }
  const auto colon = authority.rfind(':');
  if (colon != std::string_view::npos) {
    const auto port_text = authority.substr(colon + 1);
    const auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port_);
    if (ec != std::errc{} || ptr != port_text.data() + port_text.size() || port_ <= 0 || port_ > 65535) {
      throw Error(ErrorKind::Config, "bad port in prometheus url '" + options_.base_url + "'");
    }
    authority = authority.substr(0, colon);
  }
  if (authority.empty()) throw Error(ErrorKind::Config, "missing host in prometheus url '" + options_.base_url + "'");
  host_ = std::string(authority);
}

HttpResponse HttpTransport::get(const std::string& path, const QueryParams& params) {
  httplib::Client client(host_, port_);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(options_.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(options_.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  httplib::Params query;
  for (const auto& [k, v] : params) query.emplace(k, v);
  httplib::Headers headers;
  if (!options_.bearer_token.empty()) headers.emplace("Authorization", "Bearer " + options_.bearer_token);

  auto res = client.Get(prefix_ + path, query, headers);
  if (!res) {
    throw Error(ErrorKind::Transport,
                "GET " + path + " to " + host_ + ":" + std::to_string(port_) + " failed: " + httplib::to_string(res.error()));
  }
  return {res->status, res->body};
}

// --- FixtureTransport --------------------------------------------------------

std::string FixtureTransport::request_key(const std::string& path, QueryParams params) {
  std::sort(params.begin(), params.end());
  std::string key = path;
  char sep = '?';
  for (const auto& [k, v] : params) {
    key += sep;
    key += k;
    key += '=';
    key += v;
    sep = '&';
  }
  return key;
}

FixtureTransport::FixtureTransport(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw Error(ErrorKind::Config, "fixture directory not found: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    std::ifstream in(file, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    json doc;
    try {
      doc = json::parse(buf.str());
    } catch (const json::parse_error& e) {
      throw Error(ErrorKind::Config, "fixture " + file.string() + ": " + e.what());
    }
    if (doc.is_array()) {
      for (const auto& ex : doc) add_exchange(ex, file.string());
    } else {
      add_exchange(doc, file.string());
    }
  }
}

void FixtureTransport::add_exchange(const json& exchange, const std::string& origin) {
  try {
    const auto& req = exchange.at("request");
    const auto path = req.at("path").get<std::string>();
    HttpResponse resp;
    resp.status = exchange.value("status", 200);
    const auto& body = exchange.at("body");
    resp.body = body.is_string() ? body.get<std::string>() : body.dump();
    if (const auto it = req.find("params"); it != req.end()) {
      QueryParams params;
      for (const auto& [k, v] : it->items()) {
        if (v.is_array()) {
          for (const auto& item : v) params.emplace_back(k, param_value(item));
        } else {
          params.emplace_back(k, param_value(v));
        }
      }
      exact_[request_key(path, std::move(params))] = std::move(resp);
    } else {
      wildcard_[path] = std::move(resp);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, "fixture " + origin + ": " + e.what());
  }
}

HttpResponse FixtureTransport::get(const std::string& path, const QueryParams& params) {
  if (const auto it = exact_.find(request_key(path, params)); it != exact_.end()) return it->second;
  if (const auto it = wildcard_.find(path); it != wildcard_.end()) return it->second;
  const json body{{"status", "error"},
                  {"errorType", "not_found"},
                  {"error", "no fixture recorded for " + request_key(path, params)}};
  return {404, body.dump()};
}

// --- PromClient --------------------------------------------------------------

PromClient::PromClient(std::shared_ptr<Transport> transport) : transport_(std::move(transport)) {
  if (!transport_) throw Error(ErrorKind::Config, "prom client needs a transport");
}

std::shared_ptr<PromClient> PromClient::http(HttpOptions options) {
  return std::make_shared<PromClient>(std::make_shared<HttpTransport>(std::move(options)));
}

std::shared_ptr<PromClient> PromClient::fixtures(const std::filesystem::path& dir) {
  return std::make_shared<PromClient>(std::make_shared<FixtureTransport>(dir));
}

json PromClient::call(const std::string& path, const QueryParams& params, bool is_query) {
  const auto kind = is_query ? ErrorKind::Query : ErrorKind::Api;
  const auto resp = transport_->get(path, params);
  json body;
  try {
    body = json::parse(resp.body);
  } catch (const json::parse_error&) {
    throw ApiError(kind, "HTTP " + std::to_string(resp.status) + " from " + path + ": " + resp.body, resp.status, "");
  }
  const bool ok_status = resp.status >= 200 && resp.status < 300;
  const auto status = body.is_object() ? body.value("status", "") : "";
  if (!ok_status || status != "success") {
    std::string message = body.is_object() ? body.value("error", "") : "";
    if (message.empty()) message = "HTTP " + std::to_string(resp.status) + " from " + path;
    const std::string error_type = body.is_object() ? body.value("errorType", "") : "";
    throw ApiError(kind, message, resp.status, error_type);
  }
  if (!body.contains("data")) throw ApiError(kind, "response from " + path + " has no data", resp.status, "");
  return body;
}

std::vector<std::string> PromClient::list_metric_names() {
  ++names_;
  const auto body = call("/api/v1/label/__name__/values", {}, false);
  std::vector<std::string> names;
  try {
    for (const auto& n : body.at("data")) names.push_back(n.get<std::string>());
  } catch (const json::exception& e) {
    throw ApiError(ErrorKind::Api, std::string("malformed label values: ") + e.what(), 200, "");
  }
  return names;
}

MetricMetadata PromClient::fetch_metadata(const std::string& name) {
  ++metadata_;
  const auto body = call("/api/v1/metadata", {{"metric", name}}, false);
  MetricMetadata meta;
  meta.name = name;
  const auto& data = body.at("data");
  const auto it = data.find(name);
  if (it == data.end() || !it->is_array() || it->empty()) return meta;
  const auto& first = it->front();
  meta.type = parse_metric_type(first.value("type", "unknown"));
  meta.help = first.value("help", "");
  return meta;
}

QueryResult decode_query_data(const json& data) {
  QueryResult r;
  try {
    const auto type = data.at("resultType").get<std::string>();
    const auto& result = data.at("result");
    if (type == "vector") {
      r.result_type = ResultType::Vector;
      for (const auto& s : result) r.series.push_back({decode_labels(s.value("metric", json::object())), {decode_sample(s.at("value"))}});
    } else if (type == "matrix") {
      r.result_type = ResultType::Matrix;
      for (const auto& s : result) {
        Series series{decode_labels(s.value("metric", json::object())), {}};
        for (const auto& v : s.at("values")) series.samples.push_back(decode_sample(v));
        std::stable_sort(series.samples.begin(), series.samples.end(),
                         [](const Sample& a, const Sample& b) { return a.timestamp < b.timestamp; });
        r.series.push_back(std::move(series));
      }
    } else if (type == "scalar") {
      r.result_type = ResultType::Scalar;
      r.series.push_back({{}, {decode_sample(result)}});
    } else {
      throw ApiError(ErrorKind::Query, "unsupported result type '" + type + "'", 200, "");
    }
  } catch (const json::exception& e) {
    throw ApiError(ErrorKind::Query, std::string("malformed query result: ") + e.what(), 200, "");
  }
  return r;
}

QueryResult PromClient::instant_query(const std::string& promql, std::chrono::sys_seconds at) {
  if (promql.empty()) throw Error(ErrorKind::Input, "empty query");
  ++instant_;
  const auto body =
      call("/api/v1/query", {{"query", promql}, {"time", format_timestamp(at.time_since_epoch().count())}}, true);
  auto r = decode_query_data(body.at("data"));
  if (const auto it = body.find("warnings"); it != body.end()) r.warnings = it->get<std::vector<std::string>>();
  return r;
}

QueryResult PromClient::range_query(const std::string& promql, std::chrono::sys_seconds start,
                                    std::chrono::sys_seconds end, std::chrono::seconds step) {
  if (promql.empty()) throw Error(ErrorKind::Input, "empty query");
  if (start >= end) throw Error(ErrorKind::Input, "range query start must be before end");
  if (step.count() <= 0) throw Error(ErrorKind::Input, "range query step must be positive");
  ++range_;
  const auto body = call("/api/v1/query_range",
                         {{"query", promql},
                          {"start", format_timestamp(start.time_since_epoch().count())},
                          {"end", format_timestamp(end.time_since_epoch().count())},
                          {"step", format_timestamp(step.count())}},
                         true);
  auto r = decode_query_data(body.at("data"));
  if (const auto it = body.find("warnings"); it != body.end()) r.warnings = it->get<std::vector<std::string>>();
  return r;
}

CallCounts PromClient::counts() const noexcept { return {names_.load(), metadata_.load(), instant_.load(), range_.load()}; }

void PromClient::reset_counts() noexcept {
  names_ = 0;
  metadata_ = 0;
  instant_ = 0;
  range_ = 0;
}

json to_json(const QueryResult& r) {
  json series = json::array();
  for (const auto& s : r.series) {
    json samples = json::array();
    for (const auto& p : s.samples) samples.push_back({p.timestamp, p.value});
    series.push_back({{"labels", s.labels}, {"samples", samples}});
  }
  return {{"result_type", to_string(r.result_type)}, {"series", series}, {"warnings", r.warnings}};
}

json to_json(const MetricMetadata& m) {
  return {{"name", m.name}, {"type", m.type ? std::string(to_string(*m.type)) : "unknown"}, {"help", m.help}};
}

}  // namespace promnl
