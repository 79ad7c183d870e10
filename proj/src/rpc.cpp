// SPDX-License-Identifier: Apache-2.0
#include "promnl/rpc.hpp"

#include "promnl/errors.hpp"
#include "promnl/json_io.hpp"

namespace promnl {

using nlohmann::json;
using std::chrono::seconds;
using std::chrono::sys_seconds;

namespace {

struct RpcFailure {
  int code;
  std::string message;
  json data;
};

json error_response(const json& id, int code, const std::string& message, json data = nullptr) {
  json err{{"code", code}, {"message", message}};
  if (!data.is_null()) err["data"] = std::move(data);
  return {{"jsonrpc", "2.0"}, {"id", id}, {"error", std::move(err)}};
}

bool type_matches(const std::string& type, const json& v) {
  if (type == "string") return v.is_string();
  if (type == "integer") return v.is_number_integer();
  if (type == "number") return v.is_number();
  if (type == "boolean") return v.is_boolean();
  if (type == "object") return v.is_object();
  if (type == "array") return v.is_array();
  return true;
}

json prop(const char* type, const char* description) { return {{"type", type}, {"description", description}}; }

json schema(json properties, std::vector<std::string> required = {}) {
  return {{"type", "object"}, {"properties", std::move(properties)}, {"required", std::move(required)},
          {"additionalProperties", false}};
}

sys_seconds now_param(const json& p) {
  if (const auto it = p.find("now"); it != p.end()) return sys_seconds{seconds{it->get<std::int64_t>()}};
  return std::chrono::floor<seconds>(std::chrono::system_clock::now());
}

std::optional<ExplicitRange> range_params(const json& p) {
  const bool has_start = p.contains("start");
  const bool has_end = p.contains("end");
  if (has_start != has_end) throw Error(ErrorKind::Input, "'start' and 'end' must be given together");
  if (!has_start) return std::nullopt;
  return ExplicitRange{sys_seconds{seconds{p.at("start").get<std::int64_t>()}},
                       sys_seconds{seconds{p.at("end").get<std::int64_t>()}}};
}

const PromClient& require_client(const Engine& engine) {
  if (!engine.client()) throw Error(ErrorKind::Config, "no Prometheus endpoint configured");
  return *engine.client();
}

}  // namespace

std::string check_params(const json& schema_doc, const json& params) {
  if (!params.is_object()) return "params must be an object";
  const auto& props = schema_doc.at("properties");
  for (const auto& r : schema_doc.value("required", json::array())) {
    if (!params.contains(r.get<std::string>())) return "missing required parameter '" + r.get<std::string>() + "'";
  }
  for (const auto& [key, value] : params.items()) {
    const auto it = props.find(key);
    if (it == props.end()) return "unknown parameter '" + key + "'";
    const auto type = it->value("type", "");
    if (!type_matches(type, value)) return "parameter '" + key + "' must be of type " + type;
  }
  return {};
}

RpcService::RpcService(const Engine& engine) : engine_(engine) {
  const Engine& eng = engine_;

  tools_.push_back({"search_metrics", "Search catalog metrics by name and keyword overlap.",
                    schema({{"query", prop("string", "free-text search")},
                            {"limit", prop("integer", "maximum results, default 10")},
                            {"category", prop("string", "restrict to one category id")}},
                           {"query"}),
                    [&eng](const json& p) {
                      const auto limit = p.value("limit", 10);
                      if (limit <= 0) throw Error(ErrorKind::Input, "'limit' must be positive");
                      std::optional<std::string> category;
                      if (p.contains("category")) category = p.at("category").get<std::string>();
                      json out = json::array();
                      for (const auto& e : eng.search_metrics(p.at("query").get<std::string>(),
                                                              static_cast<std::size_t>(limit), category)) {
                        out.push_back(to_json(e));
                      }
                      return json{{"metrics", out}, {"count", out.size()}};
                    }});

  tools_.push_back({"get_metric_metadata", "Catalog record for a metric, plus live metadata when requested.",
                    schema({{"name", prop("string", "metric name")},
                            {"live", prop("boolean", "also ask Prometheus, default false")}},
                           {"name"}),
                    [&eng](const json& p) {
                      const auto name = p.at("name").get<std::string>();
                      const auto snapshot = eng.store().snapshot();
                      json out{{"name", name}, {"catalog", nullptr}, {"live", nullptr}};
                      if (const auto* e = snapshot->find(name)) out["catalog"] = to_json(*e);
                      if (p.value("live", false)) {
                        if (!eng.client()) throw Error(ErrorKind::Config, "no Prometheus endpoint configured");
                        out["live"] = to_json(eng.client()->fetch_metadata(name));
                      }
                      if (out["catalog"].is_null() && out["live"].is_null()) {
                        throw Error(ErrorKind::NoMetricFound, "metric '" + name + "' is not in the catalog");
                      }
                      return out;
                    }});

  tools_.push_back({"list_categories", "The category taxonomy with metric counts and hint keywords.", schema(json::object()),
                    [&eng](const json&) {
                      const auto snapshot = eng.store().snapshot();
                      const auto stats = catalog_stats(*snapshot);
                      json out = json::array();
                      for (const auto& id : category_taxonomy()) {
                        const auto count = stats.per_category.count(id) != 0 ? stats.per_category.at(id) : 0;
                        const auto kw = snapshot->category_keywords().find(id);
                        out.push_back({{"id", id},
                                       {"count", count},
                                       {"keywords", kw != snapshot->category_keywords().end() ? json(kw->second)
                                                                                              : json::array()}});
                      }
                      return json{{"categories", out}};
                    }});

  tools_.push_back({"catalog_stats", "Catalog size, per-category counts and readiness.", schema(json::object()),
                    [&eng](const json&) {
                      const auto snapshot = eng.store().snapshot();
                      auto out = to_json(catalog_stats(*snapshot));
                      out["source_version"] = snapshot->source_version();
                      out["generation"] = eng.store().generation();
                      out["gpu_ready"] = eng.gpu_ready();
                      out["warnings"] = eng.warnings();
                      return out;
                    }});

  tools_.push_back({"detect_intent", "Classify a question's intent, measurements and domain terms.",
                    schema({{"question", prop("string", "natural-language question")}}, {"question"}),
                    [&eng](const json& p) { return to_json(eng.detect(p.at("question").get<std::string>())); }});

  tools_.push_back({"resolve_time_range", "Resolve a time expression to a window and PromQL range selector.",
                    schema({{"expression", prop("string", "question or time expression")},
                            {"start", prop("integer", "explicit start, unix seconds")},
                            {"end", prop("integer", "explicit end, unix seconds")},
                            {"now", prop("integer", "reference time, unix seconds")}},
                           {"expression"}),
                    [&eng](const json& p) {
                      return to_json(eng.resolve(p.at("expression").get<std::string>(), range_params(p), now_param(p)));
                    }});

  tools_.push_back({"select_metric", "Score catalog candidates for a question and return the best one.",
                    schema({{"question", prop("string", "natural-language question")}}, {"question"}),
                    [&eng](const json& p) {
                      const auto q = p.at("question").get<std::string>();
                      const auto intent = eng.detect(q);
                      const auto snapshot = eng.store().snapshot();
                      const auto sel = select_with_details(q, intent, *snapshot, eng.config().scoring);
                      return json{{"selection", to_json(sel.best)},
                                  {"category_hints", sel.hints},
                                  {"candidate_count", sel.candidate_count},
                                  {"intent", to_string(intent.intent)}};
                    }});

  tools_.push_back({"generate_promql", "Build PromQL for a catalog metric from a question or explicit intent.",
                    schema({{"metric", prop("string", "catalog metric name")},
                            {"question", prop("string", "question used for intent and time")},
                            {"intent", prop("string", "override the detected intent")},
                            {"time_range", prop("string", "time expression, e.g. 'last 6 hours' or '15m'")},
                            {"now", prop("integer", "reference time, unix seconds")}},
                           {"metric"}),
                    [&eng](const json& p) {
                      const auto name = p.at("metric").get<std::string>();
                      const auto snapshot = eng.store().snapshot();
                      const auto* entry = snapshot->find(name);
                      if (entry == nullptr) throw Error(ErrorKind::Input, "metric '" + name + "' is not in the catalog");
                      const auto question = p.value("question", std::string());
                      IntentResult intent;
                      if (!question.empty()) intent = eng.detect(question);
                      if (p.contains("intent")) {
                        const auto parsed = parse_intent(p.at("intent").get<std::string>());
                        if (!parsed) throw Error(ErrorKind::Input, "unknown intent '" + p.at("intent").get<std::string>() + "'");
                        intent.intent = *parsed;
                      }
                      const auto expr = p.value("time_range", question);
                      return to_json(generate(*entry, intent, eng.resolve(expr, std::nullopt, now_param(p))));
                    }});

  tools_.push_back({"validate_promql", "Check PromQL well-formedness, optionally repairing it first.",
                    schema({{"query", prop("string", "PromQL text")},
                            {"repair", prop("boolean", "repair before checking, default false")},
                            {"rate_syntax", prop("string", "range used for repairs, default [5m]")}},
                           {"query"}),
                    [](const json& p) {
                      auto query = p.at("query").get<std::string>();
                      json out = json::object();
                      if (p.value("repair", false)) {
                        try {
                          auto r = repair(query, p.value("rate_syntax", std::string("[5m]")));
                          json kinds = json::array();
                          for (const auto k : r.repairs) kinds.push_back(to_string(k));
                          out["repaired"] = r.query;
                          out["repairs"] = kinds;
                          query = r.query;
                        } catch (const RepairError& e) {
                          out["repaired"] = nullptr;
                          out["repair_error"] = e.what();
                        }
                      }
                      out.update(to_json(check_promql(query)));
                      return out;
                    }});

  tools_.push_back({"execute_query", "Run an instant query against Prometheus.",
                    schema({{"query", prop("string", "PromQL text")}, {"time", prop("integer", "evaluation time, unix seconds")}},
                           {"query"}),
                    [&eng](const json& p) {
                      require_client(eng);
                      const auto at = p.contains("time") ? sys_seconds{seconds{p.at("time").get<std::int64_t>()}}
                                                         : std::chrono::floor<seconds>(std::chrono::system_clock::now());
                      return to_json(eng.client()->instant_query(p.at("query").get<std::string>(), at));
                    }});

  tools_.push_back({"execute_range_query", "Run a range query against Prometheus.",
                    schema({{"query", prop("string", "PromQL text")},
                            {"start", prop("integer", "unix seconds")},
                            {"end", prop("integer", "unix seconds")},
                            {"step", prop("integer", "resolution in seconds")}},
                           {"query", "start", "end", "step"}),
                    [&eng](const json& p) {
                      require_client(eng);
                      return to_json(eng.client()->range_query(p.at("query").get<std::string>(),
                                                               sys_seconds{seconds{p.at("start").get<std::int64_t>()}},
                                                               sys_seconds{seconds{p.at("end").get<std::int64_t>()}},
                                                               seconds{p.at("step").get<std::int64_t>()}));
                    }});

  tools_.push_back({"smart_discover", "Full pipeline: question to PromQL, optionally executed.",
                    schema({{"question", prop("string", "natural-language question")},
                            {"range", prop("string", "time expression overriding the question's")},
                            {"start", prop("integer", "explicit start, unix seconds")},
                            {"end", prop("integer", "explicit end, unix seconds")},
                            {"execute", prop("boolean", "run the query, default false")},
                            {"now", prop("integer", "reference time, unix seconds")}},
                           {"question"}),
                    [&eng](const json& p) {
                      PipelineRequest req;
                      req.question = p.at("question").get<std::string>();
                      req.explicit_range = range_params(p);
                      if (p.contains("range")) req.range_expression = p.at("range").get<std::string>();
                      req.execute = p.value("execute", false);
                      req.now = now_param(p);
                      return to_json(eng.smart_discover(req));
                    }});
}

const ToolDescriptor* RpcService::find(std::string_view name) const {
  for (const auto& t : tools_) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

json RpcService::dispatch(const std::string& method, const json& params) const {
  if (method == "tools/list") {
    json list = json::array();
    for (const auto& t : tools_) {
      list.push_back({{"name", t.name}, {"description", t.description}, {"inputSchema", t.input_schema}});
    }
    return {{"tools", list}};
  }

  const ToolDescriptor* tool = nullptr;
  json args = params;
  bool wrapped = false;
  if (method == "tools/call") {
    if (!params.is_object() || !params.contains("name") || !params.at("name").is_string()) {
      throw RpcFailure{rpc_code::kInvalidParams, "tools/call needs a string 'name'", nullptr};
    }
    tool = find(params.at("name").get<std::string>());
    if (tool == nullptr) {
      throw RpcFailure{rpc_code::kInvalidParams, "unknown tool '" + params.at("name").get<std::string>() + "'", nullptr};
    }
    args = params.value("arguments", json::object());
    wrapped = true;
  } else {
    tool = find(method);
    if (tool == nullptr) throw RpcFailure{rpc_code::kMethodNotFound, "method not found: " + method, nullptr};
  }
  if (args.is_null()) args = json::object();

  if (const auto problem = check_params(tool->input_schema, args); !problem.empty()) {
    throw RpcFailure{rpc_code::kInvalidParams, problem, nullptr};
  }

  json result;
  try {
    result = tool->handler(args);
  } catch (const PipelineError& e) {
    const int code = e.kind() == ErrorKind::Input ? rpc_code::kInvalidParams : rpc_code::kToolError;
    throw RpcFailure{code, e.what(), {{"kind", to_string(e.kind())}, {"stage", e.stage()}}};
  } catch (const Error& e) {
    const int code = e.kind() == ErrorKind::Input ? rpc_code::kInvalidParams : rpc_code::kToolError;
    throw RpcFailure{code, e.what(), {{"kind", to_string(e.kind())}}};
  } catch (const json::exception& e) {
    throw RpcFailure{rpc_code::kInvalidParams, e.what(), nullptr};
  }
  if (!wrapped) return result;
  return {{"content", json::array({{{"type", "text"}, {"text", result.dump()}}})},
          {"structuredContent", result},
          {"isError", false}};
}

json RpcService::handle_single(const json& request, bool& respond) const {
  respond = true;
  if (!request.is_object()) return error_response(nullptr, rpc_code::kInvalidRequest, "request must be an object");
  const auto id_it = request.find("id");
  const bool has_id = id_it != request.end();
  json id = has_id ? *id_it : json(nullptr);
  if (has_id && !(id.is_string() || id.is_number() || id.is_null())) {
    return error_response(nullptr, rpc_code::kInvalidRequest, "id must be a string, number or null");
  }
  const auto version = request.find("jsonrpc");
  const auto method = request.find("method");
  if (version == request.end() || *version != "2.0" || method == request.end() || !method->is_string()) {
    return error_response(id, rpc_code::kInvalidRequest, "expected jsonrpc \"2.0\" and a string method");
  }
  json params = json::object();
  if (const auto p = request.find("params"); p != request.end()) {
    if (!p->is_object() && !p->is_array()) {
      return error_response(id, rpc_code::kInvalidRequest, "params must be an object or array");
    }
    params = *p;
  }
  respond = has_id;

  try {
    if (params.is_array()) throw RpcFailure{rpc_code::kInvalidParams, "positional params are not supported", nullptr};
    return {{"jsonrpc", "2.0"}, {"id", id}, {"result", dispatch(method->get<std::string>(), params)}};
  } catch (const RpcFailure& f) {
    return error_response(id, f.code, f.message, f.data);
  } catch (const std::exception& e) {
    return error_response(id, rpc_code::kToolError, e.what());
  }
}

std::optional<json> RpcService::handle(const json& message) const {
  if (message.is_array()) {
    if (message.empty()) return error_response(nullptr, rpc_code::kInvalidRequest, "empty batch");
    json responses = json::array();
    for (const auto& req : message) {
      bool respond = true;
      auto r = handle_single(req, respond);
      if (respond) responses.push_back(std::move(r));
    }
    if (responses.empty()) return std::nullopt;
    return responses;
  }
  bool respond = true;
  auto r = handle_single(message, respond);
  if (!respond) return std::nullopt;
  return r;
}

std::optional<std::string> RpcService::handle_text(std::string_view body) const {
  json message;
  try {
    message = json::parse(body.begin(), body.end());
  } catch (const json::parse_error& e) {
    return error_response(nullptr, rpc_code::kParseError, std::string("parse error: ") + e.what()).dump();
  }
  const auto r = handle(message);
  if (!r) return std::nullopt;
  return r->dump();
}

}  // namespace promnl
