// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <chrono>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "promnl/catalog.hpp"
#include "promnl/config.hpp"
#include "promnl/intent.hpp"
#include "promnl/prom_client.hpp"
#include "promnl/promql.hpp"
#include "promnl/selector.hpp"
#include "promnl/temporal.hpp"

namespace promnl {

enum class AnswerPath { Catalog, ApiFallback };

std::string_view to_string(AnswerPath p) noexcept;

struct StageTiming {
  std::string stage;
  std::chrono::microseconds elapsed{0};
};

struct PipelineRequest {
  std::string question;
  std::optional<ExplicitRange> explicit_range;
  /// Resolved instead of the question text when set, e.g. "last 6 hours".
  std::optional<std::string> range_expression;
  bool execute = false;
  /// Defaults to the current wall clock.
  std::optional<std::chrono::sys_seconds> now;
};

struct PipelineAnswer {
  std::string question;
  IntentResult intent;
  TimeRangeInfo time;
  ScoredMetric selection;
  GeneratedQuery query;
  std::optional<QueryResult> execution;
  std::optional<std::string> execution_error;
  AnswerPath path = AnswerPath::Catalog;
  std::set<std::string> category_hints;
  std::size_t candidate_count = 0;
  std::vector<StageTiming> timings;
  std::string explanation;
};

nlohmann::json to_json(const PipelineAnswer& a);

struct EngineOptions {
  /// Discovery and validation results arriving later than this are dropped.
  std::chrono::milliseconds startup_deadline{10000};
  bool discover_gpu = true;
  bool validate = true;
  /// Upper bound on API-fallback candidates.
  std::size_t fallback_candidate_cap = 200;
};

/// Step for range execution: the window split into about 240 points, at
/// least 15 seconds.
std::chrono::seconds range_step_for(std::chrono::seconds window);

class Engine {
 public:
  Engine(Config config, Catalog catalog, std::shared_ptr<PromClient> client = nullptr, EngineOptions options = {});
  ~Engine();

  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  /// Starts GPU discovery followed by catalog validation on a background
  /// thread. Runs at most once; without a client it completes immediately.
  void start_background();
  /// Blocks until the background work has finished.
  void wait_background();

  bool catalog_ready() const noexcept { return true; }
  bool gpu_ready() const noexcept { return gpu_ready_.load(); }
  bool validation_done() const noexcept { return validation_done_.load(); }
  std::vector<std::string> warnings() const;

  const Config& config() const noexcept { return config_; }
  CatalogStore& store() noexcept { return store_; }
  const CatalogStore& store() const noexcept { return store_; }
  std::shared_ptr<PromClient> client() const noexcept { return client_; }

  /// intent -> time -> selection -> generation (-> execution). Stage failures
  /// are rethrown as PipelineError; execution failures are reported in the
  /// answer instead.
  PipelineAnswer smart_discover(const PipelineRequest& request) const;

  /// Catalog entries ranked by how many query words their name or keywords
  /// contain.
  std::vector<MetricEntry> search_metrics(std::string_view query, std::size_t limit,
                                          const std::optional<std::string>& category) const;

  IntentResult detect(std::string_view question) const;
  TimeRangeInfo resolve(std::string_view expression, std::optional<ExplicitRange> explicit_range,
                        std::chrono::sys_seconds now) const;

 private:
  void run_startup_tasks();
  void add_warning(std::string w);
  ScoredMetric api_fallback(std::string_view question, const IntentResult& intent, const Catalog& snapshot,
                            std::size_t& candidate_count) const;

  Config config_;
  CatalogStore store_;
  std::shared_ptr<PromClient> client_;
  EngineOptions options_;

  std::once_flag started_;
  std::thread worker_;
  std::atomic<bool> gpu_ready_{false};
  std::atomic<bool> validation_done_{false};
  mutable std::mutex warnings_mutex_;
  std::vector<std::string> warnings_;
};

}  // namespace promnl
