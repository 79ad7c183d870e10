// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>

// Shipped configuration and fixture data, compiled in from data/.
namespace promnl::embedded {

std::string_view keyword_rules();
std::string_view gpu_curated_keywords();
std::string_view gpu_priority_patterns();
std::string_view gpu_vendor_prefixes();
std::string_view intent_lexicon();
std::string_view scoring();
std::string_view category_keywords();
std::string_view temporal();
std::string_view gpu_fixture_catalog();

}  // namespace promnl::embedded
