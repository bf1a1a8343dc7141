#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cachelab/rational.hpp"

namespace cachelab {

enum class PlacementMode { kExactSize, kBernoulli };

/// Network-wide parameters: N files of F bits each, K users with cache
/// capacities M_k given in file-size units (0 <= M_k < N).
struct SystemConfig {
  int num_files = 0;                     // N
  int num_users = 0;                     // K
  std::vector<Rational> cache_capacities;  // M_k, size K
  std::int64_t file_size_bits = 1;       // F
  std::uint64_t seed = 0;
  PlacementMode placement_mode = PlacementMode::kExactSize;
};

struct ConfigOptions {
  /// Users with M_k >= N cache the whole library and are removed instead of
  /// rejected.
  bool drop_full_cache = false;
};

/// Validates invariants; throws std::invalid_argument on violation.
/// With drop_full_cache, users whose capacity reaches N are removed.
SystemConfig validate_config(SystemConfig config, const ConfigOptions& options = {});

SystemConfig config_from_json(const nlohmann::json& j, const ConfigOptions& options = {});
SystemConfig load_config_file(const std::string& path, const ConfigOptions& options = {});

/// Canonical JSON (sorted keys, capacities as lowest-term "p/q" strings).
/// Two configs with equal canonical JSON behave identically.
nlohmann::json canonical_config_json(const SystemConfig& config);
std::string config_hash(const SystemConfig& config);

/// Bits of each file cached by `user` (0-based): round(M_k F / N),
/// ties toward floor. Analytic formulas keep the exact rational M_k.
std::int64_t cached_bits_per_file(const SystemConfig& config, int user);

/// True when every M_k is the same rational.
bool uniform_capacities(const SystemConfig& config);

}  // namespace cachelab
