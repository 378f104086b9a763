// dnsobs command-line front end. All domain work happens behind the C API in
// libdnsobs; this translation unit only parses flags, moves bytes between
// files and the library, and stamps reports with a reproducibility manifest.

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dnsobs.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct CliError {
  int exit_code;
  std::string message;
};

[[noreturn]] void die(int exit_code, const std::string& message) { throw CliError{exit_code, message}; }

int exit_code_for(dnsobs_status status) {
  return status == DNSOBS_ERR_INVALID_ARGUMENT ? kExitUsage : kExitData;
}

// unique_ptr-style guard for library strings
struct LibString {
  char* ptr = nullptr;
  ~LibString() { dnsobs_string_free(ptr); }
  std::string str() const { return ptr == nullptr ? std::string() : std::string(ptr); }
};

void check(dnsobs_status status, const LibString& err) {
  if (status == DNSOBS_OK) return;
  std::string message = err.str();
  if (message.empty()) message = dnsobs_status_name(status);
  die(exit_code_for(status), message);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) die(kExitData, "cannot open \"" + path + "\"");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) die(kExitData, "cannot write \"" + path + "\"");
  out << content;
  if (!out) die(kExitData, "short write to \"" + path + "\"");
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Everything needed to reproduce a report. Worker count and output paths are
// execution details and deliberately stay out.
struct Manifest {
  std::string command;
  json parameters = json::object();
  json inputs = json::object();

  void add_input(const std::string& path, const std::string& content) { inputs[path] = fnv1a_hex(content); }

  json to_json() const {
    return json{{"command", command},
                {"parameters", parameters},
                {"inputs", inputs},
                {"tool_version", dnsobs_version()},
                {"format_version", dnsobs_format_version()}};
  }
};

std::string render_report(const Manifest& manifest, const json& result) {
  return json{{"manifest", manifest.to_json()}, {"result", result}}.dump(2) + "\n";
}

json parse_library_json(const std::string& text) {
  return json::parse(text);  // library output is always well-formed
}

// shared flag storage for all subcommands
struct Options {
  std::string in_path, db_path, config_path, out_path, csv_out_path, report_path;
  std::string origin;
  std::string strategy = "random";
  double alpha = 1.0;
  std::int64_t epoch = 86400;
  std::vector<std::int64_t> epochs;
  std::vector<std::int64_t> ks;
  std::int64_t top_n = 500;
  std::int64_t window = 30;
  std::int64_t dummies = 9;
  std::int64_t trials = 1000;
  std::int64_t k = 10000;
  std::int64_t record_bytes = 80;
  double change_interval = 1000.0;
  std::uint64_t seed = 1;
  bool seed_given = false;
  int threads = 1;
  bool lenient = false;
};

struct StoreGuard {
  dnsobs_store* ptr = nullptr;
  ~StoreGuard() { dnsobs_store_free(ptr); }
};

struct DbGuard {
  dnsobs_patterndb* ptr = nullptr;
  ~DbGuard() { dnsobs_patterndb_free(ptr); }
};

void load_store(const std::string& path, StoreGuard& store, Manifest& manifest) {
  const std::string text = read_file(path);
  manifest.add_input(path, text);
  LibString err;
  check(dnsobs_store_from_json(text.c_str(), &store.ptr, &err.ptr), err);
}

void load_db(const std::string& path, DbGuard& db, Manifest& manifest) {
  const std::string text = read_file(path);
  manifest.add_input(path, text);
  LibString err;
  check(dnsobs_patterndb_from_json(text.c_str(), &db.ptr, &err.ptr), err);
}

const char* origin_or_null(const Options& opt) { return opt.origin.empty() ? nullptr : opt.origin.c_str(); }

std::string config_with_seed(const Options& opt, Manifest& manifest) {
  std::string config_text = "{}";
  if (!opt.config_path.empty()) {
    config_text = read_file(opt.config_path);
    manifest.add_input(opt.config_path, config_text);
  }
  if (opt.seed_given) {
    json config = json::parse(config_text, nullptr, false);
    if (config.is_discarded() || !config.is_object())
      die(kExitData, "config \"" + opt.config_path + "\" is not a JSON object");
    config["seed"] = opt.seed;
    config_text = config.dump();
    manifest.parameters["seed"] = opt.seed;
  }
  return config_text;
}

// ---- subcommand bodies ------------------------------------------------------

int run_synth_population(const Options& opt) {
  Manifest manifest;
  manifest.command = "synth population";
  const std::string config_text = config_with_seed(opt, manifest);

  StoreGuard store;
  LibString csv, err;
  check(dnsobs_synth_population(config_text.c_str(), &store.ptr, opt.csv_out_path.empty() ? nullptr : &csv.ptr,
                                &err.ptr),
        err);
  LibString store_json;
  check(dnsobs_store_to_json(store.ptr, &store_json.ptr, &err.ptr), err);
  write_file(opt.out_path, store_json.str());
  if (!opt.csv_out_path.empty()) write_file(opt.csv_out_path, csv.str());

  LibString stats;
  check(dnsobs_store_stats(store.ptr, &stats.ptr, &err.ptr), err);
  const json s = parse_library_json(stats.str());
  std::cout << "population: " << s["users"] << " users, " << s["epochs"] << " epochs, " << s["total_requests"]
            << " requests -> " << opt.out_path << "\n";
  if (!opt.report_path.empty()) write_file(opt.report_path, render_report(manifest, s));
  return kExitOk;
}

int run_synth_patterndb(const Options& opt) {
  Manifest manifest;
  manifest.command = "synth patterndb";
  const std::string config_text = config_with_seed(opt, manifest);

  DbGuard db;
  LibString err;
  check(dnsobs_synth_pattern_db(config_text.c_str(), &db.ptr, &err.ptr), err);
  LibString db_json;
  check(dnsobs_patterndb_to_json(db.ptr, &db_json.ptr, &err.ptr), err);
  write_file(opt.out_path, db_json.str());
  std::cout << "pattern db: " << parse_library_json(db_json.str()).size() << " pages -> " << opt.out_path << "\n";
  return kExitOk;
}

int run_sessionize(const Options& opt) {
  Manifest manifest;
  manifest.command = "sessionize";
  manifest.parameters = {{"epoch_seconds", opt.epoch},
                         {"origin", opt.origin.empty() ? "auto" : opt.origin},
                         {"mode", opt.lenient ? "lenient" : "strict"}};
  const std::string csv = read_file(opt.in_path);
  manifest.add_input(opt.in_path, csv);

  StoreGuard store;
  LibString report, err;
  check(dnsobs_store_from_query_csv(csv.c_str(), opt.epoch, origin_or_null(opt), opt.lenient ? 1 : 0, &store.ptr,
                                    &report.ptr, &err.ptr),
        err);
  LibString store_json;
  check(dnsobs_store_to_json(store.ptr, &store_json.ptr, &err.ptr), err);
  write_file(opt.out_path, store_json.str());

  const json parse_report = parse_library_json(report.str());
  std::cout << "sessionized " << parse_report["parsed"] << " queries (" << parse_report["skipped"].size()
            << " skipped) -> " << opt.out_path << "\n";
  if (!opt.report_path.empty()) write_file(opt.report_path, render_report(manifest, parse_report));
  return kExitOk;
}

int run_fingerprint_uniqueness(const Options& opt) {
  Manifest manifest;
  manifest.command = "fingerprint uniqueness";
  DbGuard db;
  load_db(opt.db_path, db, manifest);
  LibString report, err;
  check(dnsobs_patterndb_uniqueness(db.ptr, &report.ptr, &err.ptr), err);
  const json result = parse_library_json(report.str());
  write_file(opt.out_path, render_report(manifest, result));
  std::cout << "unique " << result["unique_count"] << "/" << result["total"] << " (fraction "
            << result["fraction_unique"] << ") -> " << opt.out_path << "\n";
  return kExitOk;
}

int run_fingerprint_detect(const Options& opt) {
  Manifest manifest;
  manifest.command = "fingerprint detect";
  manifest.parameters = {{"window_seconds", opt.window}};
  DbGuard db;
  load_db(opt.db_path, db, manifest);
  const std::string csv = read_file(opt.in_path);
  manifest.add_input(opt.in_path, csv);

  LibString events, err;
  check(dnsobs_patterndb_detect(db.ptr, csv.c_str(), opt.window, &events.ptr, &err.ptr), err);
  const json result = parse_library_json(events.str());
  write_file(opt.out_path, render_report(manifest, result));
  std::cout << result.size() << " detection events -> " << opt.out_path << "\n";
  return kExitOk;
}

int run_link_eval(const Options& opt) {
  Manifest manifest;
  manifest.command = "link eval";
  manifest.parameters = {{"alpha", opt.alpha}};
  StoreGuard store;
  load_store(opt.in_path, store, manifest);
  LibString report, err;
  check(dnsobs_link_evaluate(store.ptr, opt.alpha, opt.threads, &report.ptr, &err.ptr), err);
  const json result = parse_library_json(report.str());
  write_file(opt.out_path, render_report(manifest, result));
  std::cout << "mean_accuracy " << result["mean_accuracy"] << " over " << result["pairs"].size()
            << " epoch pairs; perfect_user_fraction " << result["perfect_user_fraction"] << " -> " << opt.out_path
            << "\n";
  return kExitOk;
}

int run_link_sweep(const Options& opt) {
  if (opt.epochs.empty()) die(kExitUsage, "link sweep needs at least one --epoch");
  Manifest manifest;
  manifest.command = "link sweep";
  manifest.parameters = {{"alpha", opt.alpha},
                         {"epochs", opt.epochs},
                         {"origin", opt.origin.empty() ? "auto" : opt.origin}};
  const std::string csv = read_file(opt.in_path);
  manifest.add_input(opt.in_path, csv);

  LibString report, err;
  check(dnsobs_link_sweep(csv.c_str(), origin_or_null(opt), opt.epochs.data(), opt.epochs.size(), opt.alpha,
                          opt.threads, &report.ptr, &err.ptr),
        err);
  const json result = parse_library_json(report.str());
  write_file(opt.out_path, render_report(manifest, result));
  for (const auto& point : result["durations"])
    std::cout << "epoch " << point["epoch_seconds"] << "s: mean_accuracy " << point["mean_accuracy"] << " ("
              << point["pairs"] << " pairs)\n";
  return kExitOk;
}

int run_link_restrict(const Options& opt) {
  Manifest manifest;
  manifest.command = "link restrict";
  manifest.parameters = {{"top_n", opt.top_n}};
  StoreGuard store;
  load_store(opt.in_path, store, manifest);

  StoreGuard restricted;
  LibString report, err;
  check(dnsobs_link_restrict(store.ptr, opt.top_n, &restricted.ptr, &report.ptr, &err.ptr), err);
  LibString restricted_json;
  check(dnsobs_store_to_json(restricted.ptr, &restricted_json.ptr, &err.ptr), err);
  write_file(opt.out_path, restricted_json.str());

  const json result = parse_library_json(report.str());
  std::cout << "kept " << result["kept_domains"] << " domains, dropped " << result["dropped_sessions"]
            << " sessions -> " << opt.out_path << "\n";
  if (!opt.report_path.empty()) write_file(opt.report_path, render_report(manifest, result));
  return kExitOk;
}

int run_rangequery_bench(const Options& opt) {
  Manifest manifest;
  manifest.command = "rangequery bench";
  manifest.parameters = {
      {"strategy", opt.strategy}, {"dummies", opt.dummies}, {"trials", opt.trials}, {"seed", opt.seed}};
  DbGuard db;
  load_db(opt.db_path, db, manifest);

  LibString report, err;
  check(dnsobs_rangequery_bench(db.ptr, opt.strategy.c_str(), opt.dummies, opt.trials, opt.seed, opt.threads,
                                &report.ptr, &err.ptr),
        err);
  const json result = parse_library_json(report.str());
  write_file(opt.out_path, render_report(manifest, result));
  std::cout << opt.strategy << " n=" << opt.dummies << ": identification_rate " << result["identification_rate"]
            << ", mean_candidate_count " << result["mean_candidate_count"] << " -> " << opt.out_path << "\n";
  return kExitOk;
}

int run_push_rank(const Options& opt) {
  Manifest manifest;
  manifest.command = "push rank";
  StoreGuard store;
  load_store(opt.in_path, store, manifest);
  LibString ranking, err;
  check(dnsobs_push_rank(store.ptr, &ranking.ptr, &err.ptr), err);
  const json result = parse_library_json(ranking.str());
  write_file(opt.out_path, render_report(manifest, result));
  std::cout << result["entries"].size() << " ranked domains -> " << opt.out_path << "\n";
  return kExitOk;
}

int run_push_coverage(const Options& opt) {
  if (opt.ks.empty()) die(kExitUsage, "push coverage needs at least one --k");
  Manifest manifest;
  manifest.command = "push coverage";
  manifest.parameters = {{"ks", opt.ks}};
  StoreGuard store;
  load_store(opt.in_path, store, manifest);

  LibString csv, err;
  check(dnsobs_push_coverage_csv(store.ptr, opt.ks.data(), opt.ks.size(), &csv.ptr, &err.ptr), err);
  write_file(opt.out_path, csv.str());
  // the CSV column format is fixed, so the manifest rides in a sidecar
  write_file(opt.out_path + ".manifest.json", manifest.to_json().dump(2) + "\n");
  std::cout << "coverage for " << opt.ks.size() << " k values -> " << opt.out_path << "\n";
  return kExitOk;
}

int run_push_bandwidth(const Options& opt) {
  Manifest manifest;
  manifest.command = "push bandwidth";
  manifest.parameters = {
      {"k", opt.k}, {"record_bytes", opt.record_bytes}, {"change_interval_seconds", opt.change_interval}};
  LibString report, err;
  check(dnsobs_push_bandwidth(opt.k, opt.record_bytes, opt.change_interval, &report.ptr, &err.ptr), err);
  const json result = parse_library_json(report.str());
  write_file(opt.out_path, render_report(manifest, result));
  std::cout << "bytes_per_second " << result["bytes_per_second"] << " -> " << opt.out_path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dnsobs: DNS query-log observation attacks, defenses and synthetic workloads"};
  app.require_subcommand(1);
  app.set_version_flag("--version",
                       std::string("dnsobs ") + dnsobs_version() + " (format " + dnsobs_format_version() + ")");

  Options opt;
  std::function<int(const Options&)> body;

  auto add_threads = [&](CLI::App* cmd) {
    cmd->add_option("--threads", opt.threads, "worker threads (results are thread-count independent)")
        ->check(CLI::Range(1, 256));
  };
  auto add_seed_override = [&](CLI::App* cmd) {
    cmd->add_option("--seed", opt.seed, "override the config seed")
        ->each([&opt](const std::string&) { opt.seed_given = true; });
  };

  auto* synth = app.add_subcommand("synth", "generate synthetic workloads");
  synth->require_subcommand(1);
  auto* synth_population = synth->add_subcommand("population", "generate a user population session store");
  synth_population->add_option("--config", opt.config_path, "population config JSON");
  add_seed_override(synth_population);
  synth_population->add_option("--out", opt.out_path, "session store JSON output")->required();
  synth_population->add_option("--csv-out", opt.csv_out_path, "also write the raw query-log CSV");
  synth_population->add_option("--report", opt.report_path, "write a stats report with manifest");
  synth_population->callback([&] { body = run_synth_population; });

  auto* synth_patterndb = synth->add_subcommand("patterndb", "generate an access-pattern database");
  synth_patterndb->add_option("--config", opt.config_path, "pattern db config JSON");
  add_seed_override(synth_patterndb);
  synth_patterndb->add_option("--out", opt.out_path, "pattern db JSON output")->required();
  synth_patterndb->callback([&] { body = run_synth_patterndb; });

  auto* sessionize_cmd = app.add_subcommand("sessionize", "bucket a query-log CSV into per-user epochs");
  sessionize_cmd->add_option("--in", opt.in_path, "query-log CSV")->required();
  sessionize_cmd->add_option("--epoch", opt.epoch, "epoch duration in seconds")->required();
  sessionize_cmd->add_option("--origin", opt.origin, "epoch origin (RFC 3339 UTC; default: first day's midnight)");
  sessionize_cmd->add_flag("--lenient", opt.lenient, "skip malformed lines instead of aborting");
  sessionize_cmd->add_option("--out", opt.out_path, "session store JSON output")->required();
  sessionize_cmd->add_option("--report", opt.report_path, "write the parse report with manifest");
  sessionize_cmd->callback([&] { body = run_sessionize; });

  auto* fingerprint = app.add_subcommand("fingerprint", "website access-pattern analyses");
  fingerprint->require_subcommand(1);
  auto* uniqueness = fingerprint->add_subcommand("uniqueness", "how many patterns are unique in a database");
  uniqueness->add_option("--db", opt.db_path, "pattern db JSON")->required();
  uniqueness->add_option("--out", opt.out_path, "report output")->required();
  uniqueness->callback([&] { body = run_fingerprint_uniqueness; });

  auto* detect = fingerprint->add_subcommand("detect", "detect page loads in a query stream");
  detect->add_option("--db", opt.db_path, "pattern db JSON")->required();
  detect->add_option("--in", opt.in_path, "query-log CSV")->required();
  detect->add_option("--window", opt.window, "sliding window in seconds")->check(CLI::PositiveNumber);
  detect->add_option("--out", opt.out_path, "events report output")->required();
  detect->callback([&] { body = run_fingerprint_detect; });

  auto* link = app.add_subcommand("link", "behavioral session linkage");
  link->require_subcommand(1);
  auto* link_eval = link->add_subcommand("eval", "train on epoch t, link epoch t+1, for all adjacent pairs");
  link_eval->add_option("--in", opt.in_path, "session store JSON")->required();
  link_eval->add_option("--alpha", opt.alpha, "additive smoothing")->check(CLI::PositiveNumber);
  add_threads(link_eval);
  link_eval->add_option("--out", opt.out_path, "evaluation report output")->required();
  link_eval->callback([&] { body = run_link_eval; });

  auto* link_sweep = link->add_subcommand("sweep", "linkage accuracy across epoch durations");
  link_sweep->add_option("--in", opt.in_path, "query-log CSV")->required();
  link_sweep->add_option("--epoch", opt.epochs, "epoch duration in seconds (repeatable)");
  link_sweep->add_option("--origin", opt.origin, "epoch origin (RFC 3339 UTC)");
  link_sweep->add_option("--alpha", opt.alpha, "additive smoothing")->check(CLI::PositiveNumber);
  add_threads(link_sweep);
  link_sweep->add_option("--out", opt.out_path, "sweep report output")->required();
  link_sweep->callback([&] { body = run_link_sweep; });

  auto* link_restrict = link->add_subcommand("restrict", "keep only the globally most popular domains");
  link_restrict->add_option("--in", opt.in_path, "session store JSON")->required();
  link_restrict->add_option("--top-n", opt.top_n, "number of domains to keep")->required()->check(CLI::PositiveNumber);
  link_restrict->add_option("--out", opt.out_path, "restricted store JSON output")->required();
  link_restrict->add_option("--report", opt.report_path, "write the restriction report with manifest");
  link_restrict->callback([&] { body = run_link_restrict; });

  auto* rangequery = app.add_subcommand("rangequery", "dummy-traffic defense evaluation");
  rangequery->require_subcommand(1);
  auto* bench = rangequery->add_subcommand("bench", "defend sampled pages, then attack them");
  bench->add_option("--db", opt.db_path, "pattern db JSON")->required();
  bench->add_option("--strategy", opt.strategy, "random | pattern_complete");
  bench->add_option("--dummies", opt.dummies, "dummy domains (random) or decoy patterns (pattern_complete)")
      ->check(CLI::NonNegativeNumber);
  bench->add_option("--trials", opt.trials, "number of trials")->check(CLI::PositiveNumber);
  bench->add_option("--seed", opt.seed, "master seed");
  add_threads(bench);
  bench->add_option("--out", opt.out_path, "benchmark report output")->required();
  bench->callback([&] { body = run_rangequery_bench; });

  auto* push = app.add_subcommand("push", "push-service economics");
  push->require_subcommand(1);
  auto* rank = push->add_subcommand("rank", "domain popularity ranking");
  rank->add_option("--in", opt.in_path, "session store JSON")->required();
  rank->add_option("--out", opt.out_path, "ranking report output")->required();
  rank->callback([&] { body = run_push_rank; });

  auto* coverage = push->add_subcommand("coverage", "fraction of queries answerable from the top-k");
  coverage->add_option("--in", opt.in_path, "session store JSON")->required();
  coverage->add_option("--k", opt.ks, "push-set size (repeatable)");
  coverage->add_option("--out", opt.out_path, "coverage CSV output")->required();
  coverage->callback([&] { body = run_push_coverage; });

  auto* bandwidth = push->add_subcommand("bandwidth", "steady-state push traffic per subscriber");
  bandwidth->add_option("--k", opt.k, "push-set size")->check(CLI::PositiveNumber);
  bandwidth->add_option("--record-bytes", opt.record_bytes, "bytes per pushed record")->check(CLI::PositiveNumber);
  bandwidth->add_option("--change-interval", opt.change_interval, "mean seconds between record changes")
      ->check(CLI::PositiveNumber);
  bandwidth->add_option("--out", opt.out_path, "bandwidth report output")->required();
  bandwidth->callback([&] { body = run_push_bandwidth; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    return body(opt);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}
