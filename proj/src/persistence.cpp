#include "cachelab/persistence.hpp"

#include <chrono>
#include <fstream>
#include <set>

namespace cachelab {

nlohmann::json run_record_json(const RunRecord& record) {
  nlohmann::json j;
  j["configHash"] = record.config_hash;
  j["report"] = record.report;
  if (record.validation) j["validation"] = *record.validation;
  j["timestamp"] = record.timestamp;
  j["artifactVersion"] = record.artifact_version;
  return j;
}

RunRecord run_record_from_json(const nlohmann::json& j) {
  RunRecord record;
  record.config_hash = j.at("configHash").get<std::string>();
  record.report = j.at("report");
  if (j.contains("validation")) record.validation = j.at("validation");
  record.timestamp = j.at("timestamp").get<std::string>();
  record.artifact_version = j.at("artifactVersion").get<std::string>();
  return record;
}

std::string iso_utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::int64_t ResultStore::record_run(const RunRecord& record) const {
  std::int64_t lines = 0;
  {
    std::ifstream in(path_);
    std::string line;
    while (std::getline(in, line)) ++lines;
  }
  std::ofstream out(path_, std::ios::app);
  if (!out) throw std::runtime_error("cannot open store for append: " + path_);
  out << run_record_json(record).dump() << "\n";
  return lines + 1;
}

std::vector<RunRecord> ResultStore::load_all() const {
  std::vector<RunRecord> records;
  std::ifstream in(path_);
  if (!in) return records;  // absent store = empty store
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      records.push_back(run_record_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      throw std::runtime_error("store " + path_ + " line " + std::to_string(line_no) +
                               ": " + e.what());
    }
  }
  return records;
}

std::optional<RunRecord> ResultStore::latest_for(const std::string& config_hash) const {
  std::optional<RunRecord> found;
  for (const RunRecord& record : load_all())
    if (record.config_hash == config_hash) found = record;
  return found;
}

BaselineDiff ResultStore::diff_against_baseline(const std::string& config_hash,
                                                const nlohmann::json& report) const {
  BaselineDiff diff;
  const auto baseline = latest_for(config_hash);
  if (!baseline) return diff;
  diff.baseline_found = true;
  diff.changed_fields = json_changed_paths(baseline->report, report);
  return diff;
}

std::vector<std::string> json_changed_paths(const nlohmann::json& a, const nlohmann::json& b) {
  const auto flat_a = a.flatten();
  const auto flat_b = b.flatten();
  std::set<std::string> keys;
  for (const auto& [k, v] : flat_a.items()) keys.insert(k);
  for (const auto& [k, v] : flat_b.items()) keys.insert(k);
  std::vector<std::string> changed;
  for (const std::string& k : keys) {
    const bool in_a = flat_a.contains(k);
    const bool in_b = flat_b.contains(k);
    if (!in_a || !in_b || flat_a.at(k) != flat_b.at(k)) changed.push_back(k);
  }
  return changed;
}

}  // namespace cachelab
