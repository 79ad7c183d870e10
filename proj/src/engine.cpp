// SPDX-License-Identifier: Apache-2.0
#include "promnl/engine.hpp"

#include <algorithm>
#include <unordered_set>

#include "promnl/errors.hpp"
#include "promnl/gpu_discovery.hpp"
#include "promnl/json_io.hpp"
#include "promnl/text.hpp"
#include "promnl/validation.hpp"

namespace promnl {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

template <class F>
auto timed(std::vector<StageTiming>& timings, const char* stage, F&& body) {
  const auto t0 = Clock::now();
  try {
    if constexpr (std::is_void_v<decltype(body())>) {
      body();
      timings.push_back({stage, std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - t0)});
    } else {
      auto result = body();
      timings.push_back({stage, std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - t0)});
      return result;
    }
  } catch (const PipelineError&) {
    throw;
  } catch (const Error& e) {
    throw PipelineError(stage, e.kind(), e.what());
  }
}

std::string explain(const PipelineAnswer& a) {
  const auto& e = a.selection.entry;
  std::string s = e.name + " (" + std::string(to_string(e.type)) + ", " + e.category + ", " +
                  std::string(to_string(e.priority)) + " priority)";
  if (!e.help.empty()) s += ": " + e.help;
  s += ". Intent " + std::string(to_string(a.intent.intent)) + " over " + a.time.duration_text + " " +
       a.time.rate_syntax + " via template " + a.query.template_id + ".";
  if (a.path == AnswerPath::ApiFallback) s += " Selected from live Prometheus metadata.";
  return s;
}

}  // namespace

std::string_view to_string(AnswerPath p) noexcept { return p == AnswerPath::Catalog ? "catalog" : "api_fallback"; }

std::chrono::seconds range_step_for(std::chrono::seconds window) {
  const auto points = (window.count() + 239) / 240;
  return std::chrono::seconds(std::max<std::int64_t>(15, points));
}

json to_json(const PipelineAnswer& a) {
  json timings = json::object();
  for (const auto& t : a.timings) timings[t.stage] = t.elapsed.count();
  json out{{"question", a.question},
           {"path", to_string(a.path)},
           {"query", a.query.promql},
           {"intent", to_json(a.intent)},
           {"time", to_json(a.time)},
           {"selection", to_json(a.selection)},
           {"generated", to_json(a.query)},
           {"category_hints", a.category_hints},
           {"candidate_count", a.candidate_count},
           {"timings_us", timings},
           {"explanation", a.explanation},
           {"execution", nullptr},
           {"execution_error", nullptr}};
  if (a.execution) out["execution"] = to_json(*a.execution);
  if (a.execution_error) out["execution_error"] = *a.execution_error;
  return out;
}

Engine::Engine(Config config, Catalog catalog, std::shared_ptr<PromClient> client, EngineOptions options)
    : config_(std::move(config)), store_(std::move(catalog)), client_(std::move(client)), options_(options) {
  if (!client_) {
    gpu_ready_ = true;
    validation_done_ = true;
  }
}

Engine::~Engine() { wait_background(); }

void Engine::start_background() {
  std::call_once(started_, [this] {
    if (!client_) return;
    worker_ = std::thread([this] { run_startup_tasks(); });
  });
}

void Engine::wait_background() {
  static std::mutex join_mutex;
  std::lock_guard lock(join_mutex);
  if (worker_.joinable()) worker_.join();
}

std::vector<std::string> Engine::warnings() const {
  std::lock_guard lock(warnings_mutex_);
  return warnings_;
}

void Engine::add_warning(std::string w) {
  std::lock_guard lock(warnings_mutex_);
  warnings_.push_back(std::move(w));
}

void Engine::run_startup_tasks() {
  const auto t0 = Clock::now();
  auto over_deadline = [&] { return Clock::now() - t0 > options_.startup_deadline; };

  std::vector<std::string> names;
  try {
    names = client_->list_metric_names();
  } catch (const Error& e) {
    add_warning(std::string("startup: listing metric names failed, keeping static catalog: ") + e.what());
    gpu_ready_ = true;
    validation_done_ = true;
    return;
  }

  if (options_.discover_gpu) {
    if (over_deadline()) {
      add_warning("gpu discovery: deadline exceeded, skipped");
    } else {
      const auto result =
          discover_gpu_metrics(names, config_.vendor_prefixes, config_.priority_patterns, config_.keyword_rules);
      store_.update([&](Catalog& c) { merge_discovery(c, result); });
    }
  }
  gpu_ready_ = true;

  if (options_.validate) {
    if (over_deadline()) {
      add_warning("validation: deadline exceeded, skipped");
    } else {
      const std::unordered_set<std::string> live(names.begin(), names.end());
      store_.update([&](Catalog& c) {
        const auto report = validate_catalog(c, live, &config_.vendor_prefixes);
        apply_report(c, report, config_.keyword_rules);
      });
    }
  }
  validation_done_ = true;
}

IntentResult Engine::detect(std::string_view question) const { return detect_intent(question, config_.lexicon); }

TimeRangeInfo Engine::resolve(std::string_view expression, std::optional<ExplicitRange> explicit_range,
                              std::chrono::sys_seconds now) const {
  return resolve_time(expression, explicit_range, now, config_.temporal.default_window, config_.temporal.yesterday_mode);
}

ScoredMetric Engine::api_fallback(std::string_view question, const IntentResult& intent, const Catalog& snapshot,
                                  std::size_t& candidate_count) const {
  const auto names = client_->list_metric_names();

  std::vector<std::string> tokens;
  for (auto& w : text::words(text::normalize(question))) {
    if (w.size() >= 3 && config_.keyword_rules.stopwords.count(w) == 0) tokens.push_back(std::move(w));
  }
  std::vector<std::string> matched;
  for (const auto& n : names) {
    const auto lower = text::to_lower(n);
    if (std::any_of(tokens.begin(), tokens.end(), [&](const std::string& t) { return lower.find(t) != std::string::npos; })) {
      matched.push_back(n);
    }
  }
  auto families = collapse_metric_families(matched);
  if (families.size() > options_.fallback_candidate_cap) families.resize(options_.fallback_candidate_cap);
  candidate_count = families.size();

  // live names carry no curated keywords, so the strongest evidence is how
  // many question tokens a name contains; score only the best-overlapping ones
  const auto overlap = [&](const std::string& name) {
    const auto lower = text::to_lower(name);
    return std::count_if(tokens.begin(), tokens.end(), [&](const std::string& t) { return lower.find(t) != std::string::npos; });
  };
  std::ptrdiff_t best_overlap = 0;
  for (const auto& f : families) best_overlap = std::max(best_overlap, overlap(f.name));

  const auto prefix_map = build_prefix_map(snapshot);
  std::vector<MetricEntry> candidates;
  candidates.reserve(families.size());
  for (const auto& f : families) {
    const auto meta = client_->fetch_metadata(f.name);
    if (overlap(f.name) < best_overlap) continue;
    MetricEntry e;
    e.name = f.name;
    e.type = meta.type.value_or(f.type);
    e.help = meta.help;
    e.priority = Priority::Medium;
    e.category = config_.vendor_prefixes.matches_any(f.name) ? std::string(kGpuCategory)
                                                              : categorize_new_metric(f.name, prefix_map);
    e.keywords = generate_keywords(e.name, e.type, e.help, config_.keyword_rules);
    candidates.push_back(std::move(e));
  }
  return select_from(question, intent, candidates, config_.scoring);
}

PipelineAnswer Engine::smart_discover(const PipelineRequest& request) const {
  if (text::trim(request.question).empty()) throw PipelineError("intent", ErrorKind::Input, "question is empty");
  const auto now = request.now.value_or(std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now()));
  const auto snapshot = store_.snapshot();

  PipelineAnswer a;
  a.question = request.question;
  a.intent = timed(a.timings, "intent", [&] { return detect(request.question); });
  a.time = timed(a.timings, "time", [&] {
    return resolve(request.range_expression.value_or(request.question), request.explicit_range, now);
  });

  bool fallback = false;
  timed(a.timings, "select", [&] {
    try {
      auto sel = select_with_details(request.question, a.intent, *snapshot, config_.scoring);
      a.selection = std::move(sel.best);
      a.category_hints = std::move(sel.hints);
      a.candidate_count = sel.candidate_count;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoMetricFound || !client_) throw;
      a.category_hints = extract_category_hints(request.question, snapshot->category_keywords());
      fallback = true;
    }
  });
  if (fallback) {
    a.path = AnswerPath::ApiFallback;
    a.selection = timed(a.timings, "api_fallback",
                        [&] { return api_fallback(request.question, a.intent, *snapshot, a.candidate_count); });
  }

  a.query = timed(a.timings, "generate", [&] { return generate(a.selection.entry, a.intent, a.time); });

  if (request.execute) {
    const auto t0 = Clock::now();
    if (!client_) {
      a.execution_error = "no Prometheus endpoint configured";
    } else {
      try {
        if (a.intent.intent == Intent::CurrentValue) {
          a.execution = client_->instant_query(a.query.promql, a.time.end);
        } else {
          a.execution = client_->range_query(a.query.promql, a.time.start, a.time.end, range_step_for(a.time.duration));
        }
      } catch (const Error& e) {
        a.execution_error = e.what();
      }
    }
    a.timings.push_back({"execute", std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - t0)});
  }
  a.explanation = explain(a);
  return a;
}

std::vector<MetricEntry> Engine::search_metrics(std::string_view query, std::size_t limit,
                                                const std::optional<std::string>& category) const {
  if (category && !is_registered_category(*category)) {
    throw Error(ErrorKind::Input, "unknown category '" + *category + "'");
  }
  const auto words = text::words(text::normalize(query));
  if (words.empty()) throw Error(ErrorKind::Input, "search query is empty");
  const auto snapshot = store_.snapshot();

  struct Hit {
    int score;
    const MetricEntry* entry;
  };
  std::vector<Hit> hits;
  for (const auto& [cat, entries] : snapshot->categories()) {
    if (category && cat != *category) continue;
    for (const auto& e : entries) {
      const auto name = text::to_lower(e.name);
      int score = 0;
      for (const auto& w : words) {
        if (name.find(w) != std::string::npos) score += 2;
        if (std::find(e.keywords.begin(), e.keywords.end(), w) != e.keywords.end()) score += 1;
      }
      if (score > 0) hits.push_back({score, &e});
    }
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.entry->priority != b.entry->priority) return a.entry->priority == Priority::High;
    return a.entry->name < b.entry->name;
  });
  std::vector<MetricEntry> out;
  for (std::size_t i = 0; i < hits.size() && i < limit; ++i) out.push_back(*hits[i].entry);
  return out;
}

}  // namespace promnl
