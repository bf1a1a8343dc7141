#include "cachelab/demand.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "cachelab/rng.hpp"

namespace cachelab {

int DemandProfile::file_of_position(int r) const {
  for (int i = 1; i <= num_files(); ++i)
    if (r < prefix_sums[i]) return i;
  throw std::out_of_range("relabeled position out of range");
}

int DemandProfile::nonempty_groups() const {
  int n = 0;
  for (int k : group_sizes) n += k > 0 ? 1 : 0;
  return n;
}

DemandProfile build_demand_profile(const SystemConfig& config, const std::vector<int>& demands) {
  const int n = config.num_files;
  const int k = config.num_users;
  if (static_cast<int>(demands.size()) != k)
    throw std::invalid_argument("demand vector must have K entries");
  for (int d : demands)
    if (d < 1 || d > n) throw std::invalid_argument("demand id out of range [1:N]");

  DemandProfile profile;
  profile.demands = demands;
  profile.group_sizes.assign(n, 0);
  for (int d : demands) profile.group_sizes[d - 1]++;

  profile.prefix_sums.assign(n + 1, 0);
  std::partial_sum(profile.group_sizes.begin(), profile.group_sizes.end(),
                   profile.prefix_sums.begin() + 1);

  // Relabel: by demanded file, then ascending capacity, then original id
  // (stable tie-break keeps the relabeling idempotent).
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (demands[a] != demands[b]) return demands[a] < demands[b];
    return config.cache_capacities[a] < config.cache_capacities[b];
  });

  profile.to_original = order;
  profile.to_relabeled.assign(k, 0);
  for (int r = 0; r < k; ++r) profile.to_relabeled[order[r]] = r;
  return profile;
}

DemandProfile worst_case_demands(const SystemConfig& config) {
  const int n = config.num_files;
  const int k = config.num_users;

  std::vector<int> by_capacity(k);
  std::iota(by_capacity.begin(), by_capacity.end(), 0);
  std::stable_sort(by_capacity.begin(), by_capacity.end(), [&](int a, int b) {
    return config.cache_capacities[a] < config.cache_capacities[b];
  });

  std::vector<int> demands(k, 1);
  for (int p = 0; p < k; ++p) {
    const int user = by_capacity[p];
    if (p < n)
      demands[user] = p + 1;          // distinct files for the smallest caches
    else
      demands[user] = (p - n) % n + 1;  // round-robin; choice does not alter the rate
  }
  return build_demand_profile(config, demands);
}

std::vector<int> random_demands(const SystemConfig& config, std::uint64_t seed) {
  SplitRng rng(seed);
  std::vector<int> demands(config.num_users);
  for (int& d : demands) d = static_cast<int>(rng.below(config.num_files)) + 1;
  return demands;
}

}  // namespace cachelab
