// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "json.hpp"
#include "promnl/catalog.hpp"
#include "promnl/intent.hpp"
#include "promnl/promql.hpp"
#include "promnl/selector.hpp"
#include "promnl/temporal.hpp"

// JSON views of the pipeline types, shared by the RPC service, the CLI and
// the Python bindings.
namespace promnl {

nlohmann::json to_json(const MetricEntry& e);
nlohmann::json to_json(const CatalogStats& s);
nlohmann::json to_json(const IntentResult& r);
nlohmann::json to_json(const TimeRangeInfo& t);
nlohmann::json to_json(const ScoredMetric& s);
nlohmann::json to_json(const GeneratedQuery& q);
nlohmann::json to_json(const CheckResult& c);

}  // namespace promnl
