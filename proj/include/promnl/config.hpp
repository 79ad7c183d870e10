// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>

#include "promnl/catalog.hpp"
#include "promnl/gpu_discovery.hpp"
#include "promnl/intent.hpp"
#include "promnl/keywords.hpp"
#include "promnl/selector.hpp"
#include "promnl/temporal.hpp"

namespace promnl {

/// Everything the pipeline reads from configuration files.
struct Config {
  KeywordRules keyword_rules;  // includes the curated GPU keywords
  VendorPrefixConfig vendor_prefixes;
  PriorityPatterns priority_patterns;
  IntentLexicon lexicon;
  ScoringConfig scoring;
  CategoryKeywords category_keywords;
  TemporalConfig temporal;

  /// The shipped configuration compiled into the library.
  static Config defaults();

  /// Shipped defaults, with each file found in `dir` replacing its default:
  /// keyword_rules.json, gpu_curated_keywords.json, gpu_priority_patterns.json,
  /// gpu_vendor_prefixes.json, intent_lexicon.json, scoring.json,
  /// category_keywords.json, temporal.json.
  static Config load(const std::filesystem::path& dir);

  /// GPU_METRIC_PREFIXES adds custom prefixes; DEFAULT_TIME_WINDOW overrides
  /// the default window.
  void apply_environment();
};

/// Parses a config document. Throws Error(Config) naming `what` on failure.
nlohmann::json parse_config_json(std::string_view bytes, const std::string& what);

/// Reads a whole file. Throws Error(Input) when it cannot be opened.
std::string read_file(const std::filesystem::path& path);

/// Loads catalog JSON, attaches the configured category keywords and fills
/// keywords for entries that ship without them.
Catalog prepare_catalog(std::string_view json_bytes, const Config& config);

/// The shipped GPU fixture catalog, prepared with `config`.
Catalog gpu_fixture_catalog(const Config& config);

struct SyntheticSpec {
  std::size_t total = 2000;
  std::size_t high_total = 350;
  std::uint64_t seed = 7;
};

/// A deterministic full-scale catalog spanning all 17 categories. gpu_ai is
/// exactly the GPU fixture's gpu_ai list; the other fixture entries are kept
/// and the remaining categories are filled with generated families under
/// category-specific prefixes.
Catalog synthetic_catalog(const Config& config, const SyntheticSpec& spec = {});

}  // namespace promnl
