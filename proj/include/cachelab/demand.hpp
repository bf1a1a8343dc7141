#pragma once

#include <vector>

#include "cachelab/config.hpp"

namespace cachelab {

/// Demand vector plus the induced relabeling: group G_i holds the users that
/// demand file i, relabeled consecutively and sorted by ascending cache
/// capacity within the group. Relabeled positions and users are 0-based
/// internally; file ids stay 1-based as in demand vectors.
struct DemandProfile {
  std::vector<int> demands;      // original order, values in [1:N]
  std::vector<int> group_sizes;  // K_i for i in [1:N], index i-1
  std::vector<int> prefix_sums;  // S_0..S_N, size N+1
  std::vector<int> to_relabeled; // original user -> relabeled position
  std::vector<int> to_original;  // relabeled position -> original user

  int num_users() const { return static_cast<int>(demands.size()); }
  int num_files() const { return static_cast<int>(group_sizes.size()); }

  /// File demanded at relabeled position r.
  int file_of_position(int r) const;

  /// Count of nonempty groups (N' in the rate formulas).
  int nonempty_groups() const;

  bool group_empty(int file_id) const { return group_sizes[file_id - 1] == 0; }
  int group_begin(int file_id) const { return prefix_sums[file_id - 1]; }  // first position
  int group_end(int file_id) const { return prefix_sums[file_id]; }        // one past last
};

/// Groups and relabels a demand vector. Throws on demand ids outside [1:N].
DemandProfile build_demand_profile(const SystemConfig& config, const std::vector<int>& demands);

/// Worst-case demand vector: for N < K the N users with the smallest caches
/// lead distinct groups and the rest are assigned round-robin; for N >= K
/// every user requests a distinct file.
DemandProfile worst_case_demands(const SystemConfig& config);

/// Uniformly random demand vector (for dominance experiments).
std::vector<int> random_demands(const SystemConfig& config, std::uint64_t seed);

}  // namespace cachelab
