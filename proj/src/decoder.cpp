#include "cachelab/decoder.hpp"

#include <unordered_map>

#include <nlohmann/json.hpp>

#include "cachelab/gf2.hpp"

namespace cachelab {

namespace {

std::uint64_t key_of(const SubfileIndex& idx) {
  return (static_cast<std::uint64_t>(idx.file_id) << 32) | idx.users_mask;
}

std::string subfile_name(const SubfileIndex& idx) {
  std::string users;
  for (int u = 0; u < 32; ++u)
    if ((idx.users_mask >> u) & 1u) users += (users.empty() ? "" : ",") + std::to_string(u + 1);
  return "W_{" + std::to_string(idx.file_id) + ",{" + users + "}}";
}

}  // namespace

UndecodableError::UndecodableError(int user, SubfileIndex missing)
    : std::runtime_error("undecodable segment: user " + std::to_string(user + 1) +
                         " cannot resolve " + subfile_name(missing)),
      user(user),
      missing(missing) {}

BitVec decode_user(int user, const SubfilePartition& partition, const Library& library,
                   const DeliveryTranscript& transcript, const DemandProfile& profile,
                   std::int64_t* segments_consumed) {
  const std::uint32_t self = 1u << user;
  std::unordered_map<std::uint64_t, BitVec> resolved;

  // Cached subfiles (every W_{f,V} with user in V) are known from Z_k; empty
  // subfiles are known vacuously.
  auto known = [&](const SubfileIndex& idx) {
    return partition.subfile_bits(idx) == 0 || (idx.users_mask & self) != 0 ||
           resolved.count(key_of(idx)) != 0;
  };
  auto bits_of = [&](const SubfileIndex& idx) -> BitVec {
    const auto* positions = partition.indices(idx);
    if (positions == nullptr) return BitVec(0);
    if (idx.users_mask & self) return library.file(idx.file_id).gather(*positions);
    return resolved.at(key_of(idx));
  };

  std::int64_t consumed = 0;
  std::vector<const DeliverySegment*> pending;
  for (const auto& seg : transcript.segments)
    if (seg.part != PartTag::kRD) pending.push_back(&seg);

  bool progress = true;
  while (progress) {
    progress = false;
    std::vector<const DeliverySegment*> next;
    for (const DeliverySegment* seg : pending) {
      const SubfileIndex* unknown = nullptr;
      int unknown_count = 0;
      for (const auto& arg : seg->args) {
        if (!known(arg)) {
          unknown = &arg;
          if (++unknown_count > 1) break;
        }
      }
      if (unknown_count == 0) continue;  // nothing left to learn here
      if (unknown_count > 1) {
        next.push_back(seg);
        continue;
      }
      BitVec value = seg->payload;
      for (const auto& arg : seg->args)
        if (!(arg == *unknown)) value.xor_padded(bits_of(arg));
      value.resize(static_cast<std::size_t>(partition.subfile_bits(*unknown)));
      resolved.emplace(key_of(*unknown), std::move(value));
      ++consumed;
      progress = true;
    }
    pending = std::move(next);
  }

  const int demanded = profile.demands[user];
  BitVec file(static_cast<std::size_t>(partition.config.file_size_bits));
  for (const auto& [mask, positions] : partition.by_file[demanded - 1]) {
    const SubfileIndex idx{demanded, mask};
    if (!known(idx)) throw UndecodableError(user, idx);
    file.scatter(positions, bits_of(idx));
  }
  if (segments_consumed) *segments_consumed = consumed;
  return file;
}

BitVec decode_random_delivery(int user, const CachePlacement& placement, const Library& library,
                              const DeliveryTranscript& transcript,
                              const DemandProfile& profile) {
  const SystemConfig& config = placement.config;
  const int demanded = profile.demands[user];
  const DeliverySegment* segment = nullptr;
  for (const auto& seg : transcript.segments)
    if (seg.part == PartTag::kRD && seg.combo && seg.combo->file_id == demanded) segment = &seg;
  if (segment == nullptr)
    throw std::runtime_error("no random-delivery segment for file " + std::to_string(demanded));

  const std::int64_t f_bits = config.file_size_bits;
  const auto& cached = placement.cached[user][demanded - 1];

  // Bits the user already holds, placed at their true positions.
  BitVec known(static_cast<std::size_t>(f_bits));
  for (std::uint32_t b : cached) known.set_bit(b, library.file(demanded).bit(b));

  std::vector<std::uint32_t> unknown;
  unknown.reserve(static_cast<std::size_t>(f_bits) - cached.size());
  std::size_t c = 0;
  for (std::uint32_t b = 0; b < static_cast<std::uint32_t>(f_bits); ++b) {
    if (c < cached.size() && cached[c] == b)
      ++c;
    else
      unknown.push_back(b);
  }

  BitVec result = known;
  if (!unknown.empty()) {
    const std::int64_t rows = segment->combo->rows;
    Gf2Matrix restricted(rows, static_cast<std::int64_t>(unknown.size()));
    BitVec rhs(static_cast<std::size_t>(rows));
    for (std::int64_t r = 0; r < rows; ++r) {
      const BitVec row = rd_combination_row(config, demanded, r);
      restricted.fill_row_gather(r, row, unknown);
      rhs.set_bit(static_cast<std::size_t>(r),
                  segment->payload.bit(static_cast<std::size_t>(r)) ^ row.parity_and(known));
    }
    const auto solution = gf2_solve_unique(std::move(restricted), std::move(rhs));
    if (!solution)
      throw std::runtime_error("singular random-delivery system for user " +
                               std::to_string(user + 1));
    result.scatter(unknown, *solution);
  }
  return result;
}

nlohmann::json verification_report(const SubfilePartition& partition, const Library& library,
                                   const DeliveryTranscript& transcript,
                                   const DemandProfile& profile) {
  nlohmann::json users = nlohmann::json::array();
  for (int u = 0; u < profile.num_users(); ++u) {
    nlohmann::json row;
    row["user"] = u + 1;
    try {
      std::int64_t consumed = 0;
      const BitVec decoded = decode_user(u, partition, library, transcript, profile, &consumed);
      BitVec diff = decoded;
      diff.xor_padded(library.file(profile.demands[u]));
      row["decoded"] = true;
      row["mismatchedBits"] = static_cast<std::int64_t>(diff.count_ones());
      row["segmentsConsumed"] = consumed;
    } catch (const UndecodableError& e) {
      row["decoded"] = false;
      row["mismatchedBits"] = partition.config.file_size_bits;
      row["segmentsConsumed"] = 0;
      row["error"] = e.what();
    }
    users.push_back(std::move(row));
  }
  return users;
}

}  // namespace cachelab
