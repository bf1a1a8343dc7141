#include "cachelab/placement.hpp"

#include <numeric>
#include <stdexcept>

#include "cachelab/rng.hpp"

namespace cachelab {

Library generate_library(const SystemConfig& config) {
  Library lib;
  lib.files.reserve(config.num_files);
  const SplitRng root(config.seed);
  for (int i = 0; i < config.num_files; ++i) {
    SplitRng stream = root.split(stream_tag::kLibrary, static_cast<std::uint64_t>(i));
    lib.files.push_back(BitVec::random(static_cast<std::size_t>(config.file_size_bits), stream));
  }
  return lib;
}

namespace {

std::vector<std::uint32_t> sample_exact(std::int64_t f, std::int64_t count, SplitRng& rng,
                                        std::vector<std::uint32_t>& scratch) {
  scratch.resize(static_cast<std::size_t>(f));
  std::iota(scratch.begin(), scratch.end(), 0u);
  // partial Fisher-Yates: the first `count` entries end up a uniform subset
  for (std::int64_t j = 0; j < count; ++j) {
    const std::uint64_t pick = j + rng.below(static_cast<std::uint64_t>(f - j));
    std::swap(scratch[static_cast<std::size_t>(j)], scratch[static_cast<std::size_t>(pick)]);
  }
  std::vector<std::uint32_t> out(scratch.begin(), scratch.begin() + count);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint32_t> sample_bernoulli(std::int64_t f, const Rational& probability,
                                            SplitRng& rng) {
  const BigInt num_b = probability.get_num();
  const BigInt den_b = probability.get_den();
  if (!num_b.fits_ulong_p() || !den_b.fits_ulong_p())
    throw std::invalid_argument("bernoulli placement needs capacities with word-size p/q");
  const std::uint64_t num = num_b.get_ui();
  const std::uint64_t den = den_b.get_ui();
  std::vector<std::uint32_t> out;
  for (std::int64_t b = 0; b < f; ++b)
    if (rng.below(den) < num) out.push_back(static_cast<std::uint32_t>(b));
  return out;
}

}  // namespace

CachePlacement make_placement(const SystemConfig& config) {
  CachePlacement placement;
  placement.config = config;
  placement.cached.assign(config.num_users, {});
  const SplitRng root(config.seed);
  std::vector<std::uint32_t> scratch;

  for (int user = 0; user < config.num_users; ++user) {
    placement.cached[user].resize(config.num_files);
    const Rational probability =
        config.cache_capacities[user] / Rational(config.num_files);
    for (int file = 0; file < config.num_files; ++file) {
      SplitRng stream = root.split(stream_tag::kPlacement, static_cast<std::uint64_t>(user),
                                   static_cast<std::uint64_t>(file));
      if (config.placement_mode == PlacementMode::kExactSize) {
        const std::int64_t count = cached_bits_per_file(config, user);
        placement.cached[user][file] =
            sample_exact(config.file_size_bits, count, stream, scratch);
      } else {
        placement.cached[user][file] =
            sample_bernoulli(config.file_size_bits, probability, stream);
      }
    }
  }
  return placement;
}

SubfilePartition partition_subfiles(const CachePlacement& placement) {
  const SystemConfig& config = placement.config;
  if (config.num_users > 30)
    throw std::invalid_argument("subfile partition enumeration requires K <= 30");

  SubfilePartition partition;
  partition.config = config;
  partition.by_file.resize(config.num_files);

  std::vector<std::uint32_t> owner(static_cast<std::size_t>(config.file_size_bits));
  for (int file = 0; file < config.num_files; ++file) {
    std::fill(owner.begin(), owner.end(), 0u);
    for (int user = 0; user < config.num_users; ++user)
      for (std::uint32_t b : placement.cached[user][file])
        owner[b] |= 1u << user;
    auto& buckets = partition.by_file[file];
    for (std::uint32_t b = 0; b < owner.size(); ++b)
      buckets[owner[b]].push_back(b);
  }
  return partition;
}

Rational expected_subfile_fraction(const SystemConfig& config, std::uint32_t users_mask) {
  Rational fraction(1);
  const Rational n(config.num_files);
  for (int user = 0; user < config.num_users; ++user) {
    const Rational p = config.cache_capacities[user] / n;
    fraction *= (users_mask >> user) & 1u ? p : 1 - p;
  }
  fraction.canonicalize();
  return fraction;
}

}  // namespace cachelab
