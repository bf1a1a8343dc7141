#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "cachelab/analytics.hpp"
#include "cachelab/persistence.hpp"

using namespace cachelab;

namespace {

struct TempStore {
  std::string path;
  TempStore() {
    path = (std::filesystem::temp_directory_path() /
            ("cachelab_store_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++) + ".jsonl"))
               .string();
  }
  ~TempStore() { std::error_code ec; std::filesystem::remove(path, ec); }
  static int counter;
};
int TempStore::counter = 0;

SystemConfig example1() {
  SystemConfig c;
  c.num_files = 2;
  c.num_users = 4;
  c.cache_capacities = {Rational(1, 8), Rational(1, 4), Rational(1, 2), Rational(1)};
  c.file_size_bits = 1024;
  c.seed = 7;
  return c;
}

RunRecord record_for(const SystemConfig& c, GammaConvention convention) {
  RunRecord record;
  record.config_hash = config_hash(c);
  record.report = rate_report_json(rate_report(c, convention));
  record.timestamp = iso_utc_now();
  return record;
}

}  // namespace

TEST_CASE("re-running the same config yields an empty diff") {
  TempStore tmp;
  ResultStore store(tmp.path);
  const SystemConfig c = example1();
  const RunRecord first = record_for(c, GammaConvention::kFloor);
  CHECK(store.record_run(first) == 1);

  const RunRecord again = record_for(c, GammaConvention::kFloor);
  const BaselineDiff diff = store.diff_against_baseline(again.config_hash, again.report);
  CHECK(diff.baseline_found);
  CHECK(diff.changed_fields.empty());
}

TEST_CASE("missing baseline is reported as such") {
  TempStore tmp;
  ResultStore store(tmp.path);
  const BaselineDiff diff = store.diff_against_baseline("deadbeef", nlohmann::json::object());
  CHECK(!diff.baseline_found);
}

TEST_CASE("flipping the gamma convention changes only the lower-bound fields") {
  TempStore tmp;
  ResultStore store(tmp.path);
  const SystemConfig c = example1();
  store.record_run(record_for(c, GammaConvention::kFloor));
  const RunRecord flipped = record_for(c, GammaConvention::kCeil);
  const BaselineDiff diff = store.diff_against_baseline(flipped.config_hash, flipped.report);
  CHECK(diff.baseline_found);
  CHECK(!diff.changed_fields.empty());
  for (const std::string& field : diff.changed_fields)
    CHECK(field.rfind("/lowerBoundNew", 0) == 0);
}

TEST_CASE("corrupted store lines are reported with their line number") {
  TempStore tmp;
  ResultStore store(tmp.path);
  store.record_run(record_for(example1(), GammaConvention::kFloor));
  {
    std::ofstream out(tmp.path, std::ios::app);
    out << "{not json\n";
  }
  try {
    store.load_all();
    FAIL("expected a parse error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("records round-trip byte-identically") {
  const RunRecord record = record_for(example1(), GammaConvention::kFloor);
  const std::string once = run_record_json(record).dump();
  const std::string twice = run_record_json(run_record_from_json(nlohmann::json::parse(once))).dump();
  CHECK(once == twice);
}

TEST_CASE("latest record wins as the baseline") {
  TempStore tmp;
  ResultStore store(tmp.path);
  const SystemConfig c = example1();
  RunRecord first = record_for(c, GammaConvention::kFloor);
  first.report["rGBD"]["decimal"] = "tampered";
  store.record_run(first);
  store.record_run(record_for(c, GammaConvention::kFloor));

  const RunRecord fresh = record_for(c, GammaConvention::kFloor);
  const BaselineDiff diff = store.diff_against_baseline(fresh.config_hash, fresh.report);
  CHECK(diff.baseline_found);
  CHECK(diff.changed_fields.empty());  // the tampered record is superseded
}

TEST_CASE("validation summaries are preserved") {
  RunRecord record = record_for(example1(), GammaConvention::kFloor);
  record.validation = nlohmann::json{{"trials", 3}, {"decodeSuccesses", 12}};
  const nlohmann::json j = run_record_json(record);
  const RunRecord back = run_record_from_json(j);
  REQUIRE(back.validation.has_value());
  CHECK(back.validation->at("trials") == 3);
  CHECK(back.artifact_version == kArtifactVersion);
}
