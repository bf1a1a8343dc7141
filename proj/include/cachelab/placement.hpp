#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "cachelab/bitvec.hpp"
#include "cachelab/config.hpp"

namespace cachelab {

/// The N files, F random bits each, generated from the config seed.
struct Library {
  std::vector<BitVec> files;  // index: file id - 1

  const BitVec& file(int file_id) const { return files[file_id - 1]; }
};

Library generate_library(const SystemConfig& config);

/// Subfile W_{i,V}: the bits of file i cached by exactly the users in V.
/// users_mask bit u set means (0-based) user u is in V.
struct SubfileIndex {
  int file_id = 0;  // 1-based
  std::uint32_t users_mask = 0;

  friend bool operator==(const SubfileIndex&, const SubfileIndex&) = default;
  friend auto operator<=>(const SubfileIndex&, const SubfileIndex&) = default;
};

/// Per (user, file) cached bit-index sets. Each user caches exactly
/// round(M_k F / N) bits of every file, sampled uniformly from its own
/// derived RNG stream (Bernoulli sampling behind the config flag).
struct CachePlacement {
  SystemConfig config;
  std::vector<std::vector<std::vector<std::uint32_t>>> cached;  // [user][file-1], ascending

  std::int64_t cached_count(int user, int file_id) const {
    return static_cast<std::int64_t>(cached[user][file_id - 1].size());
  }
};

CachePlacement make_placement(const SystemConfig& config);

/// Exclusive-subfile partition of every file: for each file, a map from
/// user-subset mask to the ascending list of bit indices owned by exactly
/// that subset. Absent masks are empty subfiles.
struct SubfilePartition {
  SystemConfig config;
  std::vector<std::map<std::uint32_t, std::vector<std::uint32_t>>> by_file;

  const std::vector<std::uint32_t>* indices(const SubfileIndex& idx) const {
    const auto& m = by_file[idx.file_id - 1];
    auto it = m.find(idx.users_mask);
    return it == m.end() ? nullptr : &it->second;
  }

  std::int64_t subfile_bits(const SubfileIndex& idx) const {
    const auto* v = indices(idx);
    return v ? static_cast<std::int64_t>(v->size()) : 0;
  }
};

/// Requires K <= 30 (mask enumeration). The partition of each file is exact:
/// the masks' index lists are disjoint and cover [0:F).
SubfilePartition partition_subfiles(const CachePlacement& placement);

/// Asymptotic fraction |W_{i,V}|/F = prod_{k in V} M_k/N *
/// prod_{k not in V} (1 - M_k/N); independent of the file id.
Rational expected_subfile_fraction(const SystemConfig& config, std::uint32_t users_mask);

}  // namespace cachelab
