// SPDX-License-Identifier: Apache-2.0
#include "promnl/promql.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdlib>

#include "promnl/errors.hpp"
#include "promnl/text.hpp"

namespace promnl {

namespace {

constexpr auto npos = std::string::npos;

bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':'; }
bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_opener(char c) { return c == '(' || c == '[' || c == '{'; }
bool is_closer(char c) { return c == ')' || c == ']' || c == '}'; }
char closer_for(char open) { return open == '(' ? ')' : open == '[' ? ']' : '}'; }

// Marks bytes that belong to string literals, quotes included.
struct Lexed {
  std::vector<char> in_string;
  bool terminated = true;

  bool code(std::size_t i) const { return in_string[i] == 0; }
};

Lexed lex(std::string_view q) {
  Lexed lx;
  lx.in_string.assign(q.size(), 0);
  char quote = 0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const char c = q[i];
    if (quote != 0) {
      lx.in_string[i] = 1;
      if (c == '\\' && quote != '`' && i + 1 < q.size()) {
        lx.in_string[++i] = 1;
      } else if (c == quote) {
        quote = 0;
      }
      continue;
    }
    if (c == '"' || c == '\'' || c == '`') {
      quote = c;
      lx.in_string[i] = 1;
    }
  }
  lx.terminated = quote == 0;
  return lx;
}

std::size_t match_forward(std::string_view q, const Lexed& lx, std::size_t open) {
  int depth = 0;
  for (std::size_t i = open; i < q.size(); ++i) {
    if (!lx.code(i)) continue;
    if (is_opener(q[i])) {
      ++depth;
    } else if (is_closer(q[i]) && --depth == 0) {
      return i;
    }
  }
  return npos;
}

std::size_t match_backward(std::string_view q, const Lexed& lx, std::size_t close) {
  int depth = 0;
  for (std::size_t i = close + 1; i-- > 0;) {
    if (!lx.code(i)) continue;
    if (is_closer(q[i])) {
      ++depth;
    } else if (is_opener(q[i]) && --depth == 0) {
      return i;
    }
  }
  return npos;
}

std::size_t skip_space_back(std::string_view q, std::size_t pos) {
  while (pos > 0 && is_space(q[pos - 1])) --pos;
  return pos;
}

std::size_t ident_start_before(std::string_view q, std::size_t pos) {
  while (pos > 0 && is_ident_char(q[pos - 1])) --pos;
  return pos;
}

std::string_view ident_before(std::string_view q, std::size_t pos) {
  const auto end = skip_space_back(q, pos);
  const auto start = ident_start_before(q, end);
  return q.substr(start, end - start);
}

// Innermost '(' enclosing `pos`, or npos at top level.
std::size_t enclosing_paren(std::string_view q, const Lexed& lx, std::size_t pos) {
  int depth = 0;
  for (std::size_t i = pos; i-- > 0;) {
    if (!lx.code(i)) continue;
    const char c = q[i];
    if (is_closer(c)) {
      ++depth;
    } else if (is_opener(c)) {
      if (depth > 0) {
        --depth;
      } else if (c == '(') {
        return i;
      }
    }
  }
  return npos;
}

// Start of the expression a '[' applies to: a selector, a call or a
// parenthesized expression. nullopt when there is none.
std::optional<std::size_t> range_operand_start(std::string_view q, const Lexed& lx, std::size_t bracket) {
  std::size_t k = skip_space_back(q, bracket);
  if (k == 0) return std::nullopt;
  const char c = q[k - 1];
  if (c == '}') {
    const auto open = match_backward(q, lx, k - 1);
    if (open == npos) return std::nullopt;
    return ident_start_before(q, open);
  }
  if (c == ')') {
    const auto open = match_backward(q, lx, k - 1);
    if (open == npos) return std::nullopt;
    const auto before = skip_space_back(q, open);
    // sum by (l)(...): step over the grouping clause to the aggregator.
    if (before > 0 && q[before - 1] == ')') {
      const auto clause_open = match_backward(q, lx, before - 1);
      if (clause_open == npos) return open;
      const auto kw_end = skip_space_back(q, clause_open);
      const auto kw_start = ident_start_before(q, kw_end);
      const auto kw = q.substr(kw_start, kw_end - kw_start);
      if (kw != "by" && kw != "without") return open;
      const auto agg_end = skip_space_back(q, kw_start);
      const auto agg_start = ident_start_before(q, agg_end);
      return agg_start < agg_end ? agg_start : kw_start;
    }
    const auto name_start = ident_start_before(q, before);
    return name_start < before ? name_start : open;
  }
  if (is_ident_char(c)) return ident_start_before(q, k);
  return std::nullopt;
}

struct Call {
  std::string_view name;
  std::size_t open = 0;   // index of '('
  std::size_t close = 0;  // index of matching ')', npos when unbalanced
};

// Every `name(` call site whose name is in `names`, left to right.
template <std::size_t N>
std::vector<Call> find_calls(std::string_view q, const Lexed& lx, const std::array<std::string_view, N>& names) {
  std::vector<Call> calls;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!lx.code(i) || !is_ident_char(q[i]) || (i > 0 && is_ident_char(q[i - 1]))) continue;
    std::size_t e = i;
    while (e < q.size() && is_ident_char(q[e])) ++e;
    const auto ident = q.substr(i, e - i);
    std::size_t j = e;
    while (j < q.size() && is_space(q[j])) ++j;
    if (j < q.size() && q[j] == '(' && lx.code(j) &&
        std::find(names.begin(), names.end(), ident) != names.end()) {
      calls.push_back({ident, j, match_forward(q, lx, j)});
    }
    i = e - 1;
  }
  return calls;
}

constexpr std::array<std::string_view, 3> kRangeRequired{"rate", "irate", "increase"};
constexpr std::array<std::string_view, 3> kQuantileFns{"histogram_quantile", "quantile", "quantile_over_time"};

constexpr std::array<std::string_view, 23> kRangeFunctions{
    "rate",
    "irate",
    "increase",
    "delta",
    "idelta",
    "deriv",
    "predict_linear",
    "holt_winters",
    "double_exponential_smoothing",
    "changes",
    "resets",
    "avg_over_time",
    "min_over_time",
    "max_over_time",
    "sum_over_time",
    "count_over_time",
    "quantile_over_time",
    "stddev_over_time",
    "stdvar_over_time",
    "last_over_time",
    "present_over_time",
    "absent_over_time",
    "mad_over_time",
};

// Trailing commas before a closing brace inside label matchers.
bool has_trailing_comma_at(std::string_view q, const Lexed& lx, std::size_t i, int brace_depth) {
  if (q[i] != ',' || brace_depth <= 0) return false;
  std::size_t j = i + 1;
  while (j < q.size() && is_space(q[j])) ++j;
  return j < q.size() && q[j] == '}' && lx.code(j);
}

bool fix_trailing_commas(std::string& q) {
  const auto lx = lex(q);
  std::string out;
  out.reserve(q.size());
  int braces = 0;
  bool changed = false;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const char c = q[i];
    if (lx.code(i)) {
      if (c == '{') ++braces;
      if (c == '}' && braces > 0) --braces;
      if (has_trailing_comma_at(q, lx, i, braces)) {
        changed = true;
        continue;
      }
    }
    out.push_back(c);
  }
  if (changed) q = std::move(out);
  return changed;
}

bool balance(std::string& q, std::string_view original) {
  const auto lx = lex(q);
  std::vector<char> stack;
  std::string out;
  out.reserve(q.size() + 4);
  bool changed = false;
  bool in_tail = false;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const char c = q[i];
    if (!lx.code(i)) {
      if (in_tail) throw RepairError("unexpected text after unmatched closer", std::string(original));
      out.push_back(c);
      continue;
    }
    if (in_tail) {
      if (is_space(c)) {
        out.push_back(c);
      } else if (!is_closer(c)) {
        throw RepairError("unmatched closer before end of query", std::string(original));
      } else if (!stack.empty() && closer_for(stack.back()) == c) {
        stack.pop_back();
        out.push_back(c);
      } else {
        changed = true;  // drop it
      }
      continue;
    }
    if (is_opener(c)) {
      stack.push_back(c);
    } else if (is_closer(c)) {
      if (stack.empty() || closer_for(stack.back()) != c) {
        // Only a run of closers at the very end can be repaired.
        in_tail = true;
        --i;
        continue;
      }
      stack.pop_back();
    }
    out.push_back(c);
  }
  while (!stack.empty()) {
    out.push_back(closer_for(stack.back()));
    stack.pop_back();
    changed = true;
  }
  if (changed) q = std::move(out);
  return changed;
}

std::string subquery_syntax(std::string_view rate_syntax) {
  std::string s(rate_syntax);
  if (!s.empty() && s.back() == ']') s.insert(s.size() - 1, ":");
  return s;
}

bool insert_missing_ranges(std::string& q, std::string_view rate_syntax, std::string_view original) {
  bool changed = false;
  for (;;) {
    const auto lx = lex(q);
    bool inserted = false;
    for (const auto& call : find_calls(q, lx, kRangeRequired)) {
      if (call.close == npos) throw RepairError("unbalanced call", std::string(original));
      const auto end = skip_space_back(q, call.close);
      if (end <= call.open + 1) {
        throw RepairError(std::string(call.name) + "() has no argument", std::string(original));
      }
      const char last = q[end - 1];
      if (last == ']') continue;
      q.insert(end, last == ')' ? subquery_syntax(rate_syntax) : std::string(rate_syntax));
      inserted = changed = true;
      break;
    }
    if (!inserted) return changed;
  }
}

bool wrap_bare_ranges(std::string& q, std::string_view original) {
  bool changed = false;
  for (;;) {
    const auto lx = lex(q);
    bool wrapped = false;
    for (std::size_t b = 0; b < q.size(); ++b) {
      if (q[b] != '[' || !lx.code(b)) continue;
      const auto start = range_operand_start(q, lx, b);
      if (!start) throw RepairError("range selector without an operand", std::string(original));
      const auto paren = enclosing_paren(q, lx, *start);
      if (paren != npos && accepts_range_vector(ident_before(q, paren))) continue;
      const auto close = match_forward(q, lx, b);
      if (close == npos) throw RepairError("unterminated range selector", std::string(original));
      q.insert(close + 1, ")");
      q.insert(*start, "rate(");
      wrapped = changed = true;
      break;
    }
    if (!wrapped) return changed;
  }
}

void note(std::vector<RepairKind>& repairs, RepairKind kind) {
  if (std::find(repairs.begin(), repairs.end(), kind) == repairs.end()) repairs.push_back(kind);
}

std::string format_number(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

// Keeps substitution readable in the template table below.
struct TemplateArgs {
  std::string m;
  std::string r;
  std::string q;
  std::string n;
  std::string l;
};

std::string hq(const TemplateArgs& a) {
  return "histogram_quantile(" + a.q + ", sum(rate(" + a.m + "_bucket" + a.r + ")) by (le))";
}

std::string hq_by(const TemplateArgs& a) {
  return "histogram_quantile(" + a.q + ", sum by (" + a.l + ", le)(rate(" + a.m + "_bucket" + a.r + ")))";
}

std::string summary_q(const TemplateArgs& a) { return a.m + "{quantile=\"" + a.q + "\"}"; }

std::string mean_of_observations(const TemplateArgs& a) {
  return "sum(rate(" + a.m + "_sum" + a.r + ")) / sum(rate(" + a.m + "_count" + a.r + "))";
}

std::string fill(Intent intent, MetricType type, const TemplateArgs& a) {
  const auto& m = a.m;
  const auto& r = a.r;
  switch (intent) {
    case Intent::CurrentValue:
      switch (type) {
        case MetricType::Counter: return "rate(" + m + r + ")";
        case MetricType::Gauge: return m;
        case MetricType::Histogram: return hq(a);
        case MetricType::Summary: return summary_q(a);
      }
      break;
    case Intent::Count:
      switch (type) {
        case MetricType::Counter:
        case MetricType::Gauge: return "count(" + m + ")";
        case MetricType::Histogram:
        case MetricType::Summary: return "count(" + m + "_count)";
      }
      break;
    case Intent::Average:
      switch (type) {
        case MetricType::Counter: return "avg(rate(" + m + r + "))";
        case MetricType::Gauge: return "avg(" + m + ")";
        case MetricType::Histogram:
        case MetricType::Summary: return mean_of_observations(a);
      }
      break;
    case Intent::Percentile:
      switch (type) {
        case MetricType::Counter: return "quantile(" + a.q + ", rate(" + m + r + "))";
        case MetricType::Gauge: return "quantile_over_time(" + a.q + ", " + m + r + ")";
        case MetricType::Histogram: return hq(a);
        case MetricType::Summary: return summary_q(a);
      }
      break;
    case Intent::TopN:
      switch (type) {
        case MetricType::Counter: return "topk(" + a.n + ", rate(" + m + r + "))";
        case MetricType::Gauge: return "topk(" + a.n + ", " + m + ")";
        case MetricType::Histogram: return "topk(" + a.n + ", " + hq_by(a) + ")";
        case MetricType::Summary: return "topk(" + a.n + ", " + summary_q(a) + ")";
      }
      break;
    case Intent::Comparison:
      switch (type) {
        case MetricType::Counter: return "sum by (" + a.l + ")(rate(" + m + r + "))";
        case MetricType::Gauge: return "avg by (" + a.l + ")(" + m + ")";
        case MetricType::Histogram: return hq_by(a);
        case MetricType::Summary: return "avg by (" + a.l + ")(" + summary_q(a) + ")";
      }
      break;
    case Intent::Trend:
      switch (type) {
        case MetricType::Counter: return "rate(" + m + r + ")";
        case MetricType::Gauge: return "avg_over_time(" + m + r + ")";
        case MetricType::Histogram: return hq(a);
        case MetricType::Summary: return "avg_over_time(" + summary_q(a) + r + ")";
      }
      break;
    case Intent::Rate:
      switch (type) {
        case MetricType::Counter: return "sum(rate(" + m + r + "))";
        case MetricType::Gauge: return "deriv(" + m + r + ")";
        case MetricType::Histogram: return hq(a);
        case MetricType::Summary: return "sum(rate(" + m + "_count" + r + "))";
      }
      break;
  }
  return m;
}

}  // namespace

std::string_view to_string(RepairKind kind) noexcept {
  switch (kind) {
    case RepairKind::TrailingComma: return "trailing_comma";
    case RepairKind::ParenBalance: return "paren_balance";
    case RepairKind::MissingRange: return "missing_range";
    case RepairKind::BareRangeWrapped: return "bare_range_wrapped";
  }
  return "trailing_comma";
}

bool accepts_range_vector(std::string_view function_name) noexcept {
  return std::find(kRangeFunctions.begin(), kRangeFunctions.end(), function_name) != kRangeFunctions.end();
}

std::string infer_by_label(const IntentResult& intent, const MetricEntry& /*metric*/) {
  static constexpr std::array<std::pair<std::string_view, std::string_view>, 5> kLabels{{
      {"model", "model_name"},
      {"pod", "pod"},
      {"node", "node"},
      {"namespace", "namespace"},
      {"container", "container"},
  }};
  for (const auto& [entity, label] : kLabels) {
    if (intent.entities.count(std::string(entity)) != 0) return std::string(label);
  }
  return "instance";
}

GeneratedQuery generate(const MetricEntry& metric, const IntentResult& intent, const TimeRangeInfo& time) {
  GeneratedQuery out;
  out.metric = metric.name;
  out.time = time;
  out.template_id = std::string(to_string(intent.intent)) + "/" + std::string(to_string(metric.type));

  TemplateArgs args;
  args.m = metric.name;
  args.r = time.rate_syntax;
  args.q = format_number(intent.quantile.value_or(kDefaultQuantile));
  args.n = std::to_string(intent.top_n.value_or(kDefaultTopN));
  if (intent.intent == Intent::Comparison || intent.intent == Intent::TopN) {
    out.by_label = infer_by_label(intent, metric);
    args.l = *out.by_label;
  }

  auto repaired = repair(fill(intent.intent, metric.type, args), time);
  out.promql = std::move(repaired.query);
  out.repairs = std::move(repaired.repairs);
  return out;
}

RepairResult repair(std::string_view query, const TimeRangeInfo& time) { return repair(query, time.rate_syntax); }

RepairResult repair(std::string_view query, std::string_view rate_syntax) {
  if (text::trim(query).empty()) throw Error(ErrorKind::Input, "cannot repair an empty query");
  if (rate_syntax.size() < 3 || rate_syntax.front() != '[' || rate_syntax.back() != ']') {
    throw Error(ErrorKind::Input, "rate syntax must look like [5m], got '" + std::string(rate_syntax) + "'");
  }
  if (!lex(query).terminated) throw RepairError("unterminated string literal", std::string(query));

  RepairResult result;
  std::string q(query);
  constexpr int kMaxPasses = 8;
  for (int pass = 0;; ++pass) {
    if (pass == kMaxPasses) throw RepairError("repair did not converge", std::string(query));
    bool changed = false;
    if (fix_trailing_commas(q)) {
      note(result.repairs, RepairKind::TrailingComma);
      changed = true;
    }
    if (balance(q, query)) {
      note(result.repairs, RepairKind::ParenBalance);
      changed = true;
    }
    if (insert_missing_ranges(q, rate_syntax, query)) {
      note(result.repairs, RepairKind::MissingRange);
      changed = true;
    }
    if (wrap_bare_ranges(q, query)) {
      note(result.repairs, RepairKind::BareRangeWrapped);
      changed = true;
    }
    if (!changed) break;
  }
  result.query = std::move(q);
  return result;
}

CheckResult check_promql(std::string_view q) {
  CheckResult res;
  if (text::trim(q).empty()) {
    res.problems.emplace_back("empty query");
    return res;
  }
  const auto lx = lex(q);
  if (!lx.terminated) {
    res.problems.emplace_back("unterminated string literal");
    return res;
  }

  std::vector<char> stack;
  int braces = 0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!lx.code(i)) continue;
    const char c = q[i];
    if (c == '{') ++braces;
    if (c == '}' && braces > 0) --braces;
    if (has_trailing_comma_at(q, lx, i, braces)) {
      res.problems.push_back("trailing comma in label matcher at offset " + std::to_string(i));
    }
    if (is_opener(c)) {
      stack.push_back(c);
    } else if (is_closer(c)) {
      if (stack.empty() || closer_for(stack.back()) != c) {
        res.problems.push_back("unmatched '" + std::string(1, c) + "' at offset " + std::to_string(i));
        return res;
      }
      stack.pop_back();
    }
  }
  if (!stack.empty()) {
    res.problems.emplace_back("unclosed delimiter");
    return res;
  }

  for (const auto& call : find_calls(q, lx, kRangeRequired)) {
    const auto end = skip_space_back(q, call.close);
    if (end <= call.open + 1) {
      res.problems.push_back(std::string(call.name) + "() without argument");
    } else if (q[end - 1] != ']') {
      res.problems.push_back(std::string(call.name) + "() argument has no range");
    }
  }

  for (std::size_t b = 0; b < q.size(); ++b) {
    if (q[b] != '[' || !lx.code(b)) continue;
    const auto start = range_operand_start(q, lx, b);
    if (!start) {
      res.problems.push_back("range without operand at offset " + std::to_string(b));
      continue;
    }
    const auto paren = enclosing_paren(q, lx, *start);
    if (paren == npos) {
      res.problems.push_back("bare range vector at top level");
    } else if (const auto fn = ident_before(q, paren); !accepts_range_vector(fn)) {
      res.problems.push_back("range vector passed to '" + std::string(fn) + "'");
    }
  }

  for (const auto& call : find_calls(q, lx, kQuantileFns)) {
    std::size_t comma = call.open + 1;
    int depth = 0;
    for (; comma < call.close; ++comma) {
      if (!lx.code(comma)) continue;
      if (is_opener(q[comma])) ++depth;
      if (is_closer(q[comma])) --depth;
      if (q[comma] == ',' && depth == 0) break;
    }
    const auto arg = std::string(text::trim(q.substr(call.open + 1, comma - call.open - 1)));
    char* parse_end = nullptr;
    const double v = std::strtod(arg.c_str(), &parse_end);
    if (!arg.empty() && parse_end == arg.c_str() + arg.size() && !(v > 0.0 && v < 1.0)) {
      res.problems.push_back(std::string(call.name) + " quantile " + arg + " outside (0, 1)");
    }
  }
  return res;
}

}  // namespace promnl
