// SPDX-License-Identifier: Apache-2.0
#include "promnl/json_io.hpp"

namespace promnl {

using nlohmann::json;

json to_json(const MetricEntry& e) {
  return {{"name", e.name},
          {"type", to_string(e.type)},
          {"help", e.help},
          {"priority", to_string(e.priority)},
          {"keywords", e.keywords},
          {"category", e.category}};
}

json to_json(const CatalogStats& s) {
  return {{"total", s.total}, {"high", s.high}, {"medium", s.medium}, {"per_category", s.per_category}};
}

json to_json(const IntentResult& r) {
  json measurements = json::array();
  for (const auto m : r.measurements) measurements.push_back(to_string(m));
  json out{{"intent", to_string(r.intent)},
           {"measurements", measurements},
           {"domain_terms", r.domain_terms},
           {"matched_triggers", r.matched_triggers},
           {"entities", r.entities},
           {"quantile", nullptr},
           {"top_n", nullptr}};
  if (r.quantile) out["quantile"] = *r.quantile;
  if (r.top_n) out["top_n"] = *r.top_n;
  return out;
}

json to_json(const TimeRangeInfo& t) {
  return {{"start", t.start.time_since_epoch().count()},
          {"end", t.end.time_since_epoch().count()},
          {"rate_syntax", t.rate_syntax},
          {"duration_text", t.duration_text},
          {"duration_seconds", t.duration.count()},
          {"strategy", to_string(t.strategy)}};
}

json to_json(const ScoredMetric& s) {
  return {{"metric", s.entry.name},
          {"type", to_string(s.entry.type)},
          {"category", s.entry.category},
          {"priority", to_string(s.entry.priority)},
          {"s_keyword", s.s_keyword},
          {"s_type", s.s_type},
          {"s_specificity", s.s_specificity},
          {"s_priority", s.s_priority},
          {"s_total", s.s_total},
          {"keyword_hits", s.keyword_hits}};
}

json to_json(const GeneratedQuery& q) {
  json repairs = json::array();
  for (const auto r : q.repairs) repairs.push_back(to_string(r));
  json out{{"promql", q.promql},
           {"metric", q.metric},
           {"template_id", q.template_id},
           {"time", to_json(q.time)},
           {"repairs", repairs},
           {"by_label", nullptr}};
  if (q.by_label) out["by_label"] = *q.by_label;
  return out;
}

json to_json(const CheckResult& c) { return {{"ok", c.ok()}, {"problems", c.problems}}; }

}  // namespace promnl
