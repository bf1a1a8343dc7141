#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cachelab/demand.hpp"
#include "cachelab/placement.hpp"

namespace cachelab {

enum class PartTag { kP1, kP2_1, kP2_2, kP3, kRD };

std::string part_tag_name(PartTag tag);
PartTag part_tag_from_name(const std::string& name);

/// Random-delivery combination block: `rows` dense GF(2) combinations of the
/// bits of `file_id`, rows derived from the config seed so the receiver can
/// regenerate them.
struct RdDescriptor {
  int file_id = 0;
  std::int64_t rows = 0;
  std::int64_t slack_bits = 0;
};

/// One labeled payload. Coded segments carry the XOR-ed subfile arguments;
/// the payload is the zero-padded XOR, so bit_length is the longest argument.
struct DeliverySegment {
  PartTag part = PartTag::kP1;
  BitVec payload;
  std::int64_t bit_length = 0;
  std::vector<SubfileIndex> args;
  std::optional<RdDescriptor> combo;
};

struct DeliveryTranscript {
  std::vector<DeliverySegment> segments;
  std::int64_t total_bits = 0;
  Rational normalized_rate;  // total_bits / F

  std::int64_t part_bits(PartTag tag) const;
};

/// Zero-padded bitwise XOR; length of the result is the longest argument.
/// Throws on an empty argument list.
BitVec padded_xor(const std::vector<BitVec>& args);

/// Group-based CODED DELIVERY for arbitrary cache capacities.
/// Part 1: W_{i,empty} per nonempty group. Part 2.1: in-group chains
/// W_{i,{k}} (+) W_{i,{k+1}}. Part 2.2: per nonempty group pair, the two
/// cross chains plus the smallest-leader pairing. Part 3: (+)_{v in V}
/// W_{d_v, V\{v}} for |V| >= 3. Segments whose arguments are all empty are
/// omitted; ordering is deterministic (file id, then subset mask).
DeliveryTranscript coded_delivery_hetero(const SystemConfig& config,
                                         const SubfilePartition& partition,
                                         const Library& library,
                                         const DemandProfile& profile);

/// Uniform-capacity variant: padding is asymptotically a no-op under equal
/// capacities, so this is the same procedure; rejects non-uniform configs.
DeliveryTranscript coded_delivery_uniform(const SystemConfig& config,
                                          const SubfilePartition& partition,
                                          const Library& library,
                                          const DemandProfile& profile);

/// RANDOM DELIVERY: per nonempty group, ceil((1 - M_min/N) F) + slack dense
/// random combinations of the group's file. Every member's decodability is
/// certified by the GF(2) column rank over its unknown bit positions; a
/// deficient member raises InsufficientCombinationsError. Simulation is
/// capped at F <= 2^14 (rank checks are quadratic in F).
DeliveryTranscript random_delivery(const CachePlacement& placement, const Library& library,
                                   const DemandProfile& profile,
                                   std::int64_t slack_bits = 32);

struct InsufficientCombinationsError : std::runtime_error {
  InsufficientCombinationsError(int user, int file_id);
  int user;      // 0-based
  int file_id;   // 1-based
};

/// Regenerates combination row `r` for `file_id` (shared by both ends).
BitVec rd_combination_row(const SystemConfig& config, int file_id, std::int64_t row);

/// Sidecar + payload-blob transcript dump. The sidecar lists per-segment
/// {part, bitLength, provenance}; the blob concatenates payloads, each
/// segment byte-aligned.
nlohmann::json transcript_sidecar(const DeliveryTranscript& transcript);
std::vector<std::uint8_t> transcript_payload_blob(const DeliveryTranscript& transcript);
DeliveryTranscript load_transcript(const nlohmann::json& sidecar,
                                   std::span<const std::uint8_t> blob,
                                   std::int64_t file_size_bits);

}  // namespace cachelab
