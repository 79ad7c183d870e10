// SPDX-License-Identifier: Apache-2.0
#pragma once

// Reference implementations used only by tests. They deliberately avoid the
// library's own text helpers and indexes.

#include <string>
#include <string_view>
#include <vector>

#include "promnl/catalog.hpp"
#include "promnl/intent.hpp"
#include "promnl/selector.hpp"

namespace promnl::oracle {

/// Lowercase alphanumeric runs; apostrophes are deleted first.
std::vector<std::string> tokens(std::string_view s);

/// Whole-token contiguous match.
bool has_phrase(const std::vector<std::string>& haystack, std::string_view phrase);

struct OracleScore {
  std::string name;
  int total = 0;
  int keyword = 0;
  bool high = false;
};

OracleScore score(std::string_view question, const MetricEntry& e, Intent intent, const ScoringConfig& cfg);

/// Scores every entry the candidate rule admits and returns the winner's name,
/// or an empty string when nothing qualifies.
std::string brute_force_winner(std::string_view question, Intent intent, const Catalog& catalog,
                               const ScoringConfig& cfg);

/// Flat lookup rebuilt from the category lists; true when it equals the
/// catalog's own index and no name appears twice.
bool flat_lookup_consistent(const Catalog& catalog);

struct ShapeReport {
  bool balanced = true;
  bool trailing_comma = false;
  bool bare_top_level_range = false;
  bool rate_without_range = false;
};

/// Delimiter and range checks by plain depth counting, quote aware.
ShapeReport inspect(std::string_view promql);

}  // namespace promnl::oracle
