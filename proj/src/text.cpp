// SPDX-License-Identifier: Apache-2.0
#include "promnl/text.hpp"

#include <algorithm>
#include <cctype>

namespace promnl::text {

namespace {

bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

}  // namespace

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), lower);
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n\f\v");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n\f\v");
  return s.substr(first, last - first + 1);
}

std::string normalize(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  out.push_back(' ');
  for (char c : s) {
    if (c == '\'') continue;
    if (is_alnum(c)) {
      out.push_back(lower(c));
    } else if (out.back() != ' ') {
      out.push_back(' ');
    }
  }
  if (out.back() != ' ') out.push_back(' ');
  return out;
}

bool contains_phrase(std::string_view normalized, std::string_view phrase) {
  const std::string needle = normalize(phrase);
  if (needle.size() <= 2) return false;
  return normalized.find(needle) != std::string_view::npos;
}

std::vector<std::string> words(std::string_view normalized) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < normalized.size()) {
    while (i < normalized.size() && normalized[i] == ' ') ++i;
    std::size_t j = i;
    while (j < normalized.size() && normalized[j] != ' ') ++j;
    if (j > i) out.emplace_back(normalized.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<std::string> split_metric_name(std::string_view name) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= name.size(); ++i) {
    if (i == name.size() || name[i] == '_' || name[i] == ':') {
      if (i > start) out.emplace_back(name.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

bool starts_with_icase(std::string_view s, std::string_view prefix) {
  if (prefix.size() > s.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (lower(s[i]) != lower(prefix[i])) return false;
  }
  return true;
}

}  // namespace promnl::text
