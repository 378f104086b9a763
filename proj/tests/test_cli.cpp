#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

// End-to-end runs of the installed command-line binary on tiny fixtures.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kWork = fs::path("cli_scratch");

int run_cli(const std::string& args) {
  const std::string command = std::string(DNSOBS_CLI_PATH) + " " + args + " >cli_scratch/stdout.txt 2>&1";
  const int rc = std::system(command.c_str());
  return rc == -1 ? -1 : WEXITSTATUS(rc);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void spit(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
}

json report_result(const fs::path& path) {
  const json report = json::parse(slurp(path));
  REQUIRE(report.contains("manifest"));
  REQUIRE(report.contains("result"));
  REQUIRE(report["manifest"]["tool_version"] == "1.0.0");
  return report["result"];
}

struct Fixture {
  Fixture() {
    fs::remove_all(kWork);
    fs::create_directories(kWork);
    spit(kWork / "pop.json", R"({"num_users": 8, "num_epochs": 3, "global_pool_size": 200,
      "profile_size_range": [6, 12], "daily_volume": {"mean": 30, "dispersion": 5}, "seed": 11})");
    spit(kWork / "db_config.json", R"({"num_pages": 30, "pattern_size_range": [4, 8], "pool_size": 300,
      "seed": 12})");
    spit(kWork / "queries.csv",
         "timestamp,user,domain\n"
         "2015-03-01T10:00:00Z,u1,a.de\n"
         "2015-03-01T10:00:05Z,u1,b.de\n"
         "2015-03-01T10:10:00Z,u2,x.de\n"
         "2015-03-02T09:00:00Z,u1,a.de\n"
         "2015-03-02T09:00:01Z,u2,x.de\n");
    spit(kWork / "tiny_db.json", R"([{"page_id": "p1", "domains": ["a.de", "b.de"]},
      {"page_id": "p2", "domains": ["x.de", "y.de"]}])");
    spit(kWork / "sweep_queries.csv",
         "timestamp,user,domain\n"
         "2015-03-01T10:00:00Z,u1,a.de\n"
         "2015-03-01T10:00:10Z,u2,x.de\n"
         "2015-03-01T20:00:00Z,u1,a.de\n"
         "2015-03-01T20:00:10Z,u2,x.de\n"
         "2015-03-02T09:00:00Z,u1,a.de\n"
         "2015-03-02T09:00:01Z,u2,x.de\n");
  }
};

}  // namespace

TEST_CASE_FIXTURE(Fixture, "synth population writes store, csv and report") {
  REQUIRE(run_cli("synth population --config cli_scratch/pop.json --out cli_scratch/store.json "
                  "--csv-out cli_scratch/pop_queries.csv --report cli_scratch/pop_report.json") == 0);
  const json store = json::parse(slurp(kWork / "store.json"));
  CHECK(store["epoch"]["duration_seconds"] == 86400);
  CHECK(store["sessions"].size() == 24);  // 8 users x 3 epochs, all active
  CHECK(slurp(kWork / "pop_queries.csv").starts_with("timestamp,user,domain\n"));
  CHECK(report_result(kWork / "pop_report.json")["users"] == 8);
}

TEST_CASE_FIXTURE(Fixture, "synth patterndb honors a seed override") {
  REQUIRE(run_cli("synth patterndb --config cli_scratch/db_config.json --out cli_scratch/db1.json") == 0);
  REQUIRE(run_cli("synth patterndb --config cli_scratch/db_config.json --seed 99 --out cli_scratch/db2.json") == 0);
  CHECK(json::parse(slurp(kWork / "db1.json")).size() == 30);
  CHECK(slurp(kWork / "db1.json") != slurp(kWork / "db2.json"));
}

TEST_CASE_FIXTURE(Fixture, "sessionize then link eval") {
  REQUIRE(run_cli("sessionize --in cli_scratch/queries.csv --epoch 86400 --origin 2015-03-01T00:00:00Z "
                  "--out cli_scratch/sessions.json --report cli_scratch/parse_report.json") == 0);
  CHECK(report_result(kWork / "parse_report.json")["parsed"] == 5);

  REQUIRE(run_cli("link eval --in cli_scratch/sessions.json --alpha 1.0 --out cli_scratch/eval.json") == 0);
  const json eval = report_result(kWork / "eval.json");
  CHECK(eval["mean_accuracy"] == 1.0);
  CHECK(eval["alpha"] == 1.0);
  CHECK(eval["pairs"][0]["scored"] == 2);
}

TEST_CASE_FIXTURE(Fixture, "sessionize lenient skips bad lines; strict aborts") {
  spit(kWork / "bad.csv", "timestamp,user,domain\ngarbage\n2015-03-01T10:00:00Z,u1,a.de\n");
  CHECK(run_cli("sessionize --in cli_scratch/bad.csv --epoch 3600 --out cli_scratch/bad_sessions.json") == 2);
  REQUIRE(run_cli("sessionize --in cli_scratch/bad.csv --epoch 3600 --lenient "
                  "--out cli_scratch/bad_sessions.json --report cli_scratch/bad_report.json") == 0);
  CHECK(report_result(kWork / "bad_report.json")["skipped"].size() == 1);
}

TEST_CASE_FIXTURE(Fixture, "fingerprint uniqueness and detect") {
  REQUIRE(run_cli("fingerprint uniqueness --db cli_scratch/tiny_db.json --out cli_scratch/uniq.json") == 0);
  CHECK(report_result(kWork / "uniq.json")["fraction_unique"] == 1.0);

  REQUIRE(run_cli("fingerprint detect --db cli_scratch/tiny_db.json --in cli_scratch/queries.csv --window 30 "
                  "--out cli_scratch/events.json") == 0);
  // two events for u1: the completed pattern, then its aging out next day
  const json events = report_result(kWork / "events.json");
  REQUIRE(events.size() == 2);
  CHECK(events[0]["user"] == "u1");
  CHECK(events[0]["page_ids"] == json::array({"p1"}));
  CHECK(events[1]["page_ids"].empty());
}

TEST_CASE_FIXTURE(Fixture, "link sweep and restrict") {
  REQUIRE(run_cli("link sweep --in cli_scratch/sweep_queries.csv --epoch 43200 --epoch 86400 "
                  "--origin 2015-03-01T00:00:00Z --out cli_scratch/sweep.json") == 0);
  const json sweep = report_result(kWork / "sweep.json");
  CHECK(sweep["durations"].size() == 2);

  REQUIRE(run_cli("synth population --config cli_scratch/pop.json --out cli_scratch/store.json") == 0);
  REQUIRE(run_cli("link restrict --in cli_scratch/store.json --top-n 5 --out cli_scratch/restricted.json "
                  "--report cli_scratch/restrict_report.json") == 0);
  CHECK(report_result(kWork / "restrict_report.json")["kept_domains"] == 5);
  const json restricted = json::parse(slurp(kWork / "restricted.json"));
  for (const auto& session : restricted["sessions"]) CHECK(session["counts"].size() <= 5);
}

TEST_CASE_FIXTURE(Fixture, "rangequery bench for both strategies") {
  REQUIRE(run_cli("synth patterndb --config cli_scratch/db_config.json --out cli_scratch/db.json") == 0);
  REQUIRE(run_cli("rangequery bench --db cli_scratch/db.json --strategy random --dummies 5 --trials 40 --seed 7 "
                  "--out cli_scratch/bench_random.json") == 0);
  const json random_bench = report_result(kWork / "bench_random.json");
  CHECK(random_bench["trials"] == 40);
  CHECK(random_bench["identification_rate"].is_number());

  REQUIRE(run_cli("rangequery bench --db cli_scratch/db.json --strategy pattern_complete --dummies 3 --trials 40 "
                  "--seed 7 --out cli_scratch/bench_pc.json") == 0);
  CHECK(report_result(kWork / "bench_pc.json")["strategy"] == "pattern_complete");

  CHECK(run_cli("rangequery bench --db cli_scratch/db.json --strategy clever --dummies 3 --trials 10 --seed 7 "
                "--out cli_scratch/bench_bad.json") == 1);
}

TEST_CASE_FIXTURE(Fixture, "push rank, coverage and bandwidth") {
  REQUIRE(run_cli("sessionize --in cli_scratch/queries.csv --epoch 86400 --origin 2015-03-01T00:00:00Z "
                  "--out cli_scratch/sessions.json") == 0);
  REQUIRE(run_cli("push rank --in cli_scratch/sessions.json --out cli_scratch/rank.json") == 0);
  const json ranking = report_result(kWork / "rank.json");
  CHECK(ranking["entries"][0]["domain"] == "a.de");

  REQUIRE(run_cli("push coverage --in cli_scratch/sessions.json --k 1 --k 3 --out cli_scratch/coverage.csv") == 0);
  const std::string csv = slurp(kWork / "coverage.csv");
  CHECK(csv.starts_with("k,aggregate_coverage,per_user_mean_coverage\n"));
  CHECK(csv.find("\n3,1,1\n") != std::string::npos);
  CHECK(json::parse(slurp(kWork / "coverage.csv.manifest.json"))["command"] == "push coverage");

  REQUIRE(run_cli("push bandwidth --k 10000 --record-bytes 80 --change-interval 1000 "
                  "--out cli_scratch/bandwidth.json") == 0);
  const json bandwidth = report_result(kWork / "bandwidth.json");
  CHECK(bandwidth["bytes_per_second"] == 800.0);
}

TEST_CASE_FIXTURE(Fixture, "usage and data errors use distinct exit codes") {
  CHECK(run_cli("") == 1);
  CHECK(run_cli("no-such-command") == 1);
  CHECK(run_cli("link eval --out cli_scratch/x.json") == 1);          // missing --in
  CHECK(run_cli("link eval --in cli_scratch/absent.json --out cli_scratch/x.json") == 2);
  CHECK(run_cli("link restrict --in cli_scratch/queries.csv --top-n 0 --out cli_scratch/x.json") == 1);
  CHECK(run_cli("--version") == 0);
}
