// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

// Small text helpers shared by the lexicon-driven stages.
namespace promnl::text {

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);

/// Lowercases, drops apostrophes, maps every other non-alphanumeric byte to a
/// space and collapses runs. The result is padded with one space on each side
/// so phrase lookups can anchor on word boundaries.
std::string normalize(std::string_view s);

/// True when `phrase` occurs as a whole-word sequence in `normalized`, which
/// must come from normalize(). `phrase` is normalized on the fly.
bool contains_phrase(std::string_view normalized, std::string_view phrase);

/// Whitespace-separated words of a normalized string.
std::vector<std::string> words(std::string_view normalized);

/// Splits a metric name on '_' and ':' keeping empty-free, original-case tokens.
std::vector<std::string> split_metric_name(std::string_view name);

bool starts_with_icase(std::string_view s, std::string_view prefix);

}  // namespace promnl::text
