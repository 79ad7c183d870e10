// SPDX-License-Identifier: Apache-2.0
#include "test_support.hpp"

#include <algorithm>

#include "promnl/keywords.hpp"
#include "promnl/promql.hpp"
#include "promnl/temporal.hpp"
#include "promnl/validation.hpp"
#include "oracles.hpp"

namespace promnl::testing {

std::filesystem::path source_dir() { return PROMNL_TEST_SOURCE_DIR; }
std::filesystem::path prometheus_fixtures() { return source_dir() / "data" / "fixtures" / "prometheus"; }
std::filesystem::path test_fixture(const std::string& name) { return source_dir() / "tests" / "fixtures" / name; }

const Config& default_config() {
  static const Config cfg = Config::defaults();
  return cfg;
}

MetricEntry make_entry(const EntrySpec& spec) {
  MetricEntry e;
  e.name = spec.name;
  e.category = spec.category;
  e.type = spec.type;
  e.priority = spec.priority;
  e.keywords = spec.keywords;
  e.help = spec.help;
  return e;
}

Catalog make_catalog(std::initializer_list<EntrySpec> specs) {
  Catalog c;
  for (const auto& s : specs) c.insert(make_entry(s));
  c.set_category_keywords(default_config().category_keywords);
  return c;
}

std::unordered_set<std::string> live_series(const Catalog& catalog) {
  std::unordered_set<std::string> live;
  for (const auto& [cat, entries] : catalog.categories()) {
    for (const auto& e : entries) {
      for (auto& s : exposed_series_names(e)) live.insert(std::move(s));
    }
  }
  return live;
}

ValidationScenario validation_scenario(const Config& cfg) {
  SyntheticSpec spec;
  spec.total = 1995;
  auto c = synthetic_catalog(cfg, spec);
  ValidationScenario out;
  out.before = c.size();

  auto live = live_series(c);
  std::size_t retired = 0;
  for (const auto& [cat, entries] : c.categories()) {
    if (cat == "gpu_ai") continue;
    for (const auto& e : entries) {
      if (retired == 8) break;
      if (e.priority == Priority::High) continue;
      for (const auto& s : exposed_series_names(e)) live.erase(s);
      ++retired;
    }
  }
  for (const char* n : {"etcd_snapshot_save_total", "node_pressure_io_waiting_seconds_total",
                        "coredns_cache_evictions_total", "kube_job_status_active_now", "zz_custom_exporter_up"}) {
    live.insert(n);
  }

  const auto report = validate_catalog(c, live, &cfg.vendor_prefixes);
  out.stale = report.stale.size();
  out.adopted = report.adopted.size();
  apply_report(c, report, cfg.keyword_rules);
  out.after = catalog_stats(c).total;
  out.consistent = oracle::flat_lookup_consistent(c);
  out.converged = validate_catalog(c, live, &cfg.vendor_prefixes).empty();
  return out;
}

namespace {

template <class T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v) {
  return v[rng() % v.size()];
}

const std::vector<std::string> kPrefixes = {"DCGM_FI_DEV_", "vllm:", "node_", "container_", "kube_pod_", "etcd_",
                                            "apiserver_", "habanalabs_", "amdgpu_", "coredns_"};
const std::vector<std::string> kWords = {"gpu", "temp", "memory", "tokens", "cache", "cpu", "network", "latency",
                                         "errors", "pod", "usage", "power", "time_to_first_token", "receive",
                                         "disk", "requests", "duration", "queue"};
const std::vector<std::string> kQuestionWords = {
    "gpu",  "temperature", "memory", "token",   "tokens", "cache",  "kv cache", "cpu",     "network",
    "ttft", "latency",     "errors", "pod",     "pods",   "vllm",   "dcgm",     "cuda",    "power",
    "disk", "etcd",        "node",   "traffic", "slow",   "failed", "kube",     "container"};
const std::vector<std::string> kLeads = {"what is the", "show", "how many", "average", "p99", "top 5",
                                         "compare",     "rate of", "how has", ""};

}  // namespace

Catalog random_catalog(std::mt19937_64& rng, std::size_t max_size, const Config& cfg) {
  const auto& taxonomy = category_taxonomy();
  const std::size_t n = 1 + rng() % max_size;
  Catalog c;
  c.set_category_keywords(cfg.category_keywords);
  static const std::vector<MetricType> types = {MetricType::Counter, MetricType::Gauge, MetricType::Histogram,
                                                MetricType::Summary};
  while (c.size() < n) {
    MetricEntry e;
    e.name = pick(rng, kPrefixes) + pick(rng, kWords);
    const auto extra = rng() % 3;
    for (std::size_t i = 0; i < extra; ++i) e.name += "_" + pick(rng, kWords);
    e.type = pick(rng, types);
    if (e.type == MetricType::Counter) e.name += "_total";
    e.priority = rng() % 3 == 0 ? Priority::High : Priority::Medium;
    e.category = pick(rng, taxonomy);
    if (rng() % 4 == 0) e.category = "gpu_ai";
    const auto tiers = rng() % 2 ? KeywordTiers::all() : KeywordTiers::adoption();
    e.keywords = generate_keywords(e.name, e.type, "", cfg.keyword_rules, tiers);
    c.insert(std::move(e));
  }
  return c;
}

std::string random_question(std::mt19937_64& rng) {
  std::string q = pick(rng, kLeads);
  const auto n = 1 + rng() % 3;
  for (std::size_t i = 0; i < n; ++i) q += " " + pick(rng, kQuestionWords);
  if (rng() % 2) q += " over the last 6 hours";
  return q;
}

namespace {

bool is_closer(char c) { return c == ')' || c == ']' || c == '}'; }

std::vector<std::string> seed_queries() {
  std::vector<std::string> seeds = {
      R"(sum by (pod)(rate(container_cpu_usage_seconds_total{namespace="prod",pod=~"api-.*"}[5m])))",
      R"(label_replace(up{job="a(b"}, "x", "$1", "instance", "(.*):.*"))",
      R"(histogram_quantile(0.99, sum by (le, service)(rate(http_request_duration_seconds_bucket{code!~"5.."}[10m]))))",
      R"(increase(kube_pod_container_status_restarts_total{container="app"}[1h]))",
      R"(irate(node_network_receive_bytes_total{device="eth0"}[2m]))",
      R"(max_over_time(DCGM_FI_DEV_GPU_TEMP{gpu="0"}[30m]))",
      R"(rate(rate(foo_total[5m])[30m:1m]))",
      R"(avg(rate(apiserver_request_total{verb="GET",resource="pods"}[15m])) / 2)",
      R"(topk(3, sum by (model_name)(rate(vllm:generation_tokens_total[1d]))))",
      R"(up{job="prometheus"} == 1)",
  };
  const std::vector<MetricEntry> metrics = {
      make_entry({"vllm:time_to_first_token_seconds", "gpu_ai", MetricType::Histogram}),
      make_entry({"DCGM_FI_DEV_GPU_TEMP", "gpu_ai", MetricType::Gauge}),
      make_entry({"vllm:generation_tokens_total", "gpu_ai", MetricType::Counter}),
      make_entry({"apiserver_request_duration_seconds", "api_server", MetricType::Summary}),
  };
  const std::vector<std::string> ranges = {"[5m]", "[1h]", "[6h]", "[1d]", "[21d]"};
  const std::vector<Intent> intents = {Intent::CurrentValue, Intent::Count, Intent::Average, Intent::Percentile,
                                       Intent::TopN, Intent::Comparison, Intent::Trend, Intent::Rate};
  for (const auto& m : metrics) {
    for (const auto intent : intents) {
      for (const auto& r : ranges) {
        IntentResult ir;
        ir.intent = intent;
        if (intent == Intent::Comparison) ir.entities = {"model"};
        TimeRangeInfo t;
        t.rate_syntax = r;
        t.end = std::chrono::sys_seconds{std::chrono::seconds{kNow}};
        t.duration = parse_duration(r.substr(1, r.size() - 2));
        t.start = t.end - t.duration;
        seeds.push_back(generate(m, ir, t).promql);
      }
    }
  }
  return seeds;
}

// Applies one mutation in place; returns false when it does not apply.
bool mutate(std::string& q, std::mt19937_64& rng) {
  switch (rng() % 7) {
    case 0: {  // drop closers at the tail
      std::size_t n = 1 + rng() % 3;
      bool changed = false;
      while (n-- > 0 && !q.empty() && is_closer(q.back())) {
        q.pop_back();
        changed = true;
      }
      return changed;
    }
    case 1: {  // stray closer at the tail
      static const std::string closers = ")]}";
      q += closers[rng() % closers.size()];
      return true;
    }
    case 2: {  // trailing comma inside an existing matcher
      std::vector<std::size_t> at;
      bool in_str = false;
      int braces = 0;
      for (std::size_t i = 0; i < q.size(); ++i) {
        if (q[i] == '"') in_str = !in_str;
        if (in_str) continue;
        if (q[i] == '{') ++braces;
        if (q[i] != '}' || braces == 0) continue;
        --braces;
        if (q[i - 1] != '{' && q[i - 1] != ',') at.push_back(i);
      }
      if (at.empty()) return false;
      q.insert(at[rng() % at.size()], rng() % 2 ? "," : ", ");
      return true;
    }
    case 3: {  // empty matcher with a trailing comma on the first metric
      const auto pos = q.find("_bucket[");
      if (pos == std::string::npos) return false;
      q.insert(pos + 7, "{le!=\"\",}");
      return true;
    }
    case 4: {  // strip the range from a rate-like call
      for (const std::string fn : {"rate(", "irate(", "increase("}) {
        auto pos = q.find(fn);
        while (pos != std::string::npos && pos > 0 && (std::isalnum(static_cast<unsigned char>(q[pos - 1])) || q[pos - 1] == '_')) {
          pos = q.find(fn, pos + 1);
        }
        if (pos == std::string::npos) continue;
        const auto open = q.find('[', pos);
        const auto close = open == std::string::npos ? open : q.find(']', open);
        const auto paren = q.find(')', pos);
        if (open == std::string::npos || close == std::string::npos || close > paren) continue;
        if (q.find('(', pos + fn.size()) < open) continue;  // nested call, leave alone
        q.erase(open, close - open + 1);
        return true;
      }
      return false;
    }
    case 5: {  // unwrap rate(M[R]) into a bare M[R]
      const auto pos = q.find("rate(");
      if (pos == std::string::npos || (pos > 0 && q[pos - 1] == 'i')) return false;
      const auto close_range = q.find("])", pos);
      if (close_range == std::string::npos) return false;
      if (q.find('(', pos + 5) < close_range) return false;
      q.erase(close_range + 1, 1);
      q.erase(pos, 5);
      return true;
    }
    default: {  // whitespace noise after a comma or before a closer
      std::vector<std::size_t> at;
      bool in_str = false;
      for (std::size_t i = 0; i < q.size(); ++i) {
        if (q[i] == '"') in_str = !in_str;
        if (!in_str && (q[i] == ',' || q[i] == ')')) at.push_back(i);
      }
      if (at.empty()) return false;
      q.insert(at[rng() % at.size()], " ");
      return true;
    }
  }
}

}  // namespace

std::vector<std::string> repair_corpus(std::size_t size, std::uint64_t seed) {
  const auto seeds = seed_queries();
  std::mt19937_64 rng(seed);
  std::vector<std::string> out;
  out.reserve(size);
  while (out.size() < size) {
    auto q = seeds[rng() % seeds.size()];
    const auto rounds = 1 + rng() % 3;
    bool changed = false;
    for (std::size_t i = 0; i < rounds; ++i) changed = mutate(q, rng) || changed;
    if (changed || rng() % 10 == 0) out.push_back(std::move(q));
  }
  return out;
}

}  // namespace promnl::testing
