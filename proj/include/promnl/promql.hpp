// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "promnl/catalog.hpp"
#include "promnl/intent.hpp"
#include "promnl/temporal.hpp"

namespace promnl {

enum class RepairKind { TrailingComma, ParenBalance, MissingRange, BareRangeWrapped };

std::string_view to_string(RepairKind kind) noexcept;

struct GeneratedQuery {
  std::string promql;
  std::string metric;
  std::string template_id;  // "<intent>/<type>"
  TimeRangeInfo time;
  std::vector<RepairKind> repairs;
  std::optional<std::string> by_label;
};

inline constexpr double kDefaultQuantile = 0.95;
inline constexpr int kDefaultTopN = 5;

/// Grouping label for comparison and top-n queries: model_name, pod, node,
/// namespace or container depending on the entities named in the question,
/// otherwise instance.
std::string infer_by_label(const IntentResult& intent, const MetricEntry& metric);

/// Fills the template for (intent, metric type) and runs repair() over it.
GeneratedQuery generate(const MetricEntry& metric, const IntentResult& intent, const TimeRangeInfo& time);

struct RepairResult {
  std::string query;
  std::vector<RepairKind> repairs;  // each kind at most once, in the order first applied
};

/// Fixes trailing commas in label matchers, unbalanced closers, range-less
/// rate/irate/increase calls and bare range vectors, repeating until nothing
/// changes. Throws RepairError when the query cannot be fixed and Error(Input)
/// for a blank query or empty rate syntax.
RepairResult repair(std::string_view query, std::string_view rate_syntax);
RepairResult repair(std::string_view query, const TimeRangeInfo& time);

struct CheckResult {
  std::vector<std::string> problems;
  bool ok() const noexcept { return problems.empty(); }
};

/// Structural well-formedness: terminated strings, balanced delimiters, no
/// trailing commas in matchers, ranges on every rate/irate/increase call,
/// range vectors only inside functions that take them, quantiles in (0, 1).
CheckResult check_promql(std::string_view query);

/// Functions whose argument may be a range vector.
bool accepts_range_vector(std::string_view function_name) noexcept;

}  // namespace promnl
