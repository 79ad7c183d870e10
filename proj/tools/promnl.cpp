// SPDX-License-Identifier: Apache-2.0
// promnl: ask questions about Prometheus metrics in plain language.
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "promnl/config.hpp"
#include "promnl/engine.hpp"
#include "promnl/errors.hpp"
#include "promnl/http_server.hpp"
#include "promnl/rpc.hpp"

namespace {

using namespace promnl;

struct GlobalOptions {
  std::string prometheus_url;
  std::string bearer_token;
  std::string catalog = "builtin:synthetic";
  std::string fixtures;
  std::string default_window;
  std::string config_dir;
  std::optional<std::int64_t> now;
  bool no_validate = false;
};

Config load_config(const GlobalOptions& g) {
  auto cfg = g.config_dir.empty() ? Config::defaults() : Config::load(g.config_dir);
  cfg.apply_environment();
  if (!g.default_window.empty()) cfg.temporal.default_window = parse_duration(g.default_window);
  return cfg;
}

Catalog load_catalog_option(const std::string& spec, const Config& cfg) {
  if (spec == "builtin:synthetic") return synthetic_catalog(cfg);
  if (spec == "builtin:gpu-fixture") return gpu_fixture_catalog(cfg);
  return prepare_catalog(read_file(spec), cfg);
}

std::shared_ptr<PromClient> make_client(const GlobalOptions& g) {
  if (!g.fixtures.empty()) return PromClient::fixtures(g.fixtures);
  if (!g.prometheus_url.empty()) return PromClient::http({g.prometheus_url, g.bearer_token, std::chrono::seconds(10)});
  return nullptr;
}

std::unique_ptr<Engine> make_engine(const GlobalOptions& g) {
  auto cfg = load_config(g);
  auto catalog = load_catalog_option(g.catalog, cfg);
  EngineOptions opts;
  opts.validate = !g.no_validate;
  return std::make_unique<Engine>(std::move(cfg), std::move(catalog), make_client(g), opts);
}

std::string format_value(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

void print_table(const QueryResult& r, std::ostream& out) {
  out << "Result (" << to_string(r.result_type) << ", " << r.series.size() << " series)\n";
  std::size_t width = 6;
  std::vector<std::string> labels;
  for (const auto& s : r.series) {
    std::string l = "{";
    bool first = true;
    for (const auto& [k, v] : s.labels) {
      if (!first) l += ", ";
      l += k + "=\"" + v + "\"";
      first = false;
    }
    l += "}";
    width = std::max(width, l.size());
    labels.push_back(std::move(l));
  }
  out << "  " << std::left << std::setw(static_cast<int>(width)) << "series" << "  " << std::setw(12) << "timestamp"
      << "  value\n";
  for (std::size_t i = 0; i < r.series.size(); ++i) {
    const auto& s = r.series[i];
    if (s.samples.empty()) continue;
    const auto& last = s.samples.back();
    out << "  " << std::setw(static_cast<int>(width)) << labels[i] << "  " << std::setw(12)
        << format_value(last.timestamp) << "  " << format_value(last.value);
    if (s.samples.size() > 1) out << "  (" << s.samples.size() << " samples)";
    out << "\n";
  }
  for (const auto& w : r.warnings) out << "  warning: " << w << "\n";
}

void print_answer(const PipelineAnswer& a, std::ostream& out) {
  const auto& s = a.selection;
  out << "PromQL:  " << a.query.promql << "\n";
  out << "Metric:  " << s.entry.name << " (" << to_string(s.entry.type) << ", " << s.entry.category << ", "
      << to_string(s.entry.priority) << ")\n";
  out << "Score:   total " << s.s_total << " = keyword " << s.s_keyword << " + type " << s.s_type
      << " + specificity " << s.s_specificity << " + priority " << s.s_priority;
  if (!s.keyword_hits.empty()) {
    out << "  [";
    for (std::size_t i = 0; i < s.keyword_hits.size(); ++i) out << (i ? ", " : "") << s.keyword_hits[i];
    out << "]";
  }
  out << "\n";
  out << "Intent:  " << to_string(a.intent.intent) << "\n";
  out << "Time:    " << a.time.duration_text << " " << a.time.rate_syntax << " (" << to_string(a.time.strategy) << ")\n";
  out << "Path:    " << to_string(a.path) << ", " << a.candidate_count << " candidates\n";
  if (!a.query.repairs.empty()) {
    out << "Repairs:";
    for (const auto r : a.query.repairs) out << " " << to_string(r);
    out << "\n";
  }
  if (a.execution) print_table(*a.execution, out);
  if (a.execution_error) out << "Execution failed: " << *a.execution_error << "\n";
}

PipelineRequest make_request(const GlobalOptions& g, std::string question, const std::string& range, bool execute) {
  PipelineRequest req;
  req.question = std::move(question);
  if (!range.empty()) req.range_expression = range;
  req.execute = execute;
  if (g.now) req.now = std::chrono::sys_seconds{std::chrono::seconds{*g.now}};
  return req;
}

int run_ask(const GlobalOptions& g, const std::string& question, const std::string& range, bool execute, bool as_json) {
  auto engine = make_engine(g);
  engine->start_background();
  engine->wait_background();
  const auto answer = engine->smart_discover(make_request(g, question, range, execute));
  if (as_json) {
    std::cout << to_json(answer).dump(2) << "\n";
  } else {
    print_answer(answer, std::cout);
  }
  return 0;
}

int run_repl(const GlobalOptions& g, bool execute) {
  auto engine = make_engine(g);
  engine->start_background();
  std::cout << "promnl: " << engine->store().snapshot()->size() << " metrics loaded. Type a question, or 'quit'.\n";
  std::string line;
  while (std::cout << "> " << std::flush, std::getline(std::cin, line)) {
    const auto trimmed = line.substr(0, line.find_last_not_of(" \t\r") + 1);
    if (trimmed.empty()) continue;
    if (trimmed == "quit" || trimmed == "exit") break;
    try {
      print_answer(engine->smart_discover(make_request(g, trimmed, "", execute)), std::cout);
    } catch (const Error& e) {
      std::cout << "error: " << e.what() << "\n";
    }
  }
  return 0;
}

int run_serve(const GlobalOptions& g, const std::string& host, int port) {
  auto engine = make_engine(g);
  engine->start_background();
  RpcService rpc(*engine);
  HttpServer server(*engine, rpc);
  const int bound = server.bind(host, port);
  std::cerr << "promnl: serving JSON-RPC on http://" << host << ":" << bound << "/rpc\n";
  server.listen();
  return 0;
}

int run_gen_catalog(const GlobalOptions& g, std::size_t total, std::size_t high, const std::string& out_path) {
  const auto cfg = load_config(g);
  SyntheticSpec spec;
  spec.total = total;
  spec.high_total = high;
  const auto text = dump_catalog(synthetic_catalog(cfg, spec), 1);
  if (out_path.empty() || out_path == "-") {
    std::cout << text << "\n";
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Input, "cannot write " + out_path);
    out << text << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Translate natural-language questions into PromQL"};
  app.require_subcommand(1);

  GlobalOptions g;
  if (const char* url = std::getenv("PROMETHEUS_URL")) g.prometheus_url = url;
  app.add_option("--prometheus-url", g.prometheus_url, "Prometheus or Thanos base URL (env PROMETHEUS_URL)");
  app.add_option("--bearer-token", g.bearer_token, "Bearer token sent to Prometheus");
  app.add_option("--catalog", g.catalog, "Catalog JSON file, builtin:synthetic or builtin:gpu-fixture")
      ->capture_default_str();
  app.add_option("--fixtures", g.fixtures, "Replay Prometheus responses from this directory");
  app.add_option("--default-window", g.default_window, "Window used when the question names none, e.g. 1h");
  app.add_option("--config", g.config_dir, "Directory with configuration overrides");
  app.add_option("--now", g.now, "Reference time as unix seconds");
  app.add_flag("--no-validate", g.no_validate, "Skip startup validation against live metric names");

  std::string question;
  std::string range;
  bool execute = false;
  bool as_json = false;
  auto* ask = app.add_subcommand("ask", "Answer one question");
  ask->add_option("question", question, "The question")->required();
  ask->add_option("--range", range, "Time expression overriding the question's, e.g. 'last 6 hours'");
  ask->add_flag("--execute", execute, "Run the query against Prometheus");
  ask->add_flag("--json", as_json, "Print the full answer as JSON");

  bool repl_execute = false;
  auto* repl = app.add_subcommand("repl", "Interactive session");
  repl->add_flag("--execute", repl_execute, "Run each query against Prometheus");

  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Serve the JSON-RPC tool interface over HTTP");
  serve->add_option("--host", host, "Bind address")->capture_default_str();
  serve->add_option("--port", port, "Port, 0 for any free port")->capture_default_str();

  std::size_t total = 2000;
  std::size_t high = 350;
  std::string out_path;
  auto* gen = app.add_subcommand("gen-catalog", "Write the synthetic full-size catalog");
  gen->add_option("--total", total, "Number of metrics")->capture_default_str();
  gen->add_option("--high", high, "Number of High-priority metrics")->capture_default_str();
  gen->add_option("-o,--out", out_path, "Output file, '-' for stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ask) return run_ask(g, question, range, execute, as_json);
    if (*repl) return run_repl(g, repl_execute);
    if (*serve) return run_serve(g, host, port);
    if (*gen) return run_gen_catalog(g, total, high, out_path);
  } catch (const PipelineError& e) {
    std::cerr << "error in " << e.stage() << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
