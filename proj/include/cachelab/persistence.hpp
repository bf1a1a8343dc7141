#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace cachelab {

inline constexpr const char* kArtifactVersion = "0.1.0";

/// One stored run: config digest, the rate report, and an optional
/// Monte-Carlo validation summary.
struct RunRecord {
  std::string config_hash;
  nlohmann::json report;
  std::optional<nlohmann::json> validation;
  std::string timestamp;        // ISO 8601 UTC
  std::string artifact_version = kArtifactVersion;
};

nlohmann::json run_record_json(const RunRecord& record);
RunRecord run_record_from_json(const nlohmann::json& j);

std::string iso_utc_now();

struct BaselineDiff {
  bool baseline_found = false;
  std::vector<std::string> changed_fields;  // JSON pointer paths into the report
};

/// Append-only line-delimited JSON store; the regression baseline for every
/// golden number.
class ResultStore {
 public:
  explicit ResultStore(std::string path) : path_(std::move(path)) {}

  /// Appends and returns the 1-based line id.
  std::int64_t record_run(const RunRecord& record) const;

  /// Throws std::runtime_error naming the offending line on corruption.
  std::vector<RunRecord> load_all() const;

  std::optional<RunRecord> latest_for(const std::string& config_hash) const;

  /// Field-by-field exact comparison of `report` against the latest stored
  /// record for this hash.
  BaselineDiff diff_against_baseline(const std::string& config_hash,
                                     const nlohmann::json& report) const;

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Changed leaf paths between two JSON documents (union of keys, exact
/// value comparison).
std::vector<std::string> json_changed_paths(const nlohmann::json& a, const nlohmann::json& b);

}  // namespace cachelab
