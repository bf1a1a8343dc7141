#pragma once

#include <nlohmann/json_fwd.hpp>

#include "cachelab/delivery.hpp"

namespace cachelab {

/// Raised when the transcript cannot resolve a subfile the user needs; names
/// the first unresolved subfile, which points at the delivery bug.
struct UndecodableError : std::runtime_error {
  UndecodableError(int user, SubfileIndex missing);
  int user;  // 0-based
  SubfileIndex missing;
};

/// Reconstructs W_{d_user} from the user's cache plus the coded-delivery
/// transcript. Decoding is constraint propagation to a fixed point: a coded
/// segment with exactly one unknown argument resolves it; RD segments are
/// ignored. Returns the full F-bit file. `segments_consumed`, when given,
/// receives the number of segments that resolved something for this user.
BitVec decode_user(int user, const SubfilePartition& partition, const Library& library,
                   const DeliveryTranscript& transcript, const DemandProfile& profile,
                   std::int64_t* segments_consumed = nullptr);

/// Solves the RANDOM DELIVERY GF(2) system over the user's unknown bit
/// positions. Throws on a singular system (precluded by the delivery-side
/// rank certification).
BitVec decode_random_delivery(int user, const CachePlacement& placement, const Library& library,
                              const DeliveryTranscript& transcript,
                              const DemandProfile& profile);

/// Per-user verification: decodes everyone and compares against the library.
/// JSON rows: {user, decoded, mismatchedBits, segmentsConsumed}.
nlohmann::json verification_report(const SubfilePartition& partition, const Library& library,
                                   const DeliveryTranscript& transcript,
                                   const DemandProfile& profile);

}  // namespace cachelab
