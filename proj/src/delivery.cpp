#include "cachelab/delivery.hpp"

#include <bit>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "cachelab/gf2.hpp"
#include "cachelab/rng.hpp"

namespace cachelab {

std::string part_tag_name(PartTag tag) {
  switch (tag) {
    case PartTag::kP1: return "P1";
    case PartTag::kP2_1: return "P2_1";
    case PartTag::kP2_2: return "P2_2";
    case PartTag::kP3: return "P3";
    case PartTag::kRD: return "RD";
  }
  throw std::logic_error("bad part tag");
}

PartTag part_tag_from_name(const std::string& name) {
  if (name == "P1") return PartTag::kP1;
  if (name == "P2_1") return PartTag::kP2_1;
  if (name == "P2_2") return PartTag::kP2_2;
  if (name == "P3") return PartTag::kP3;
  if (name == "RD") return PartTag::kRD;
  throw std::invalid_argument("unknown part tag: " + name);
}

std::int64_t DeliveryTranscript::part_bits(PartTag tag) const {
  std::int64_t bits = 0;
  for (const auto& seg : segments)
    if (seg.part == tag) bits += seg.bit_length;
  return bits;
}

BitVec padded_xor(const std::vector<BitVec>& args) {
  if (args.empty()) throw std::invalid_argument("padded_xor needs at least one argument");
  BitVec out = args.front();
  for (std::size_t i = 1; i < args.size(); ++i) out.xor_padded(args[i]);
  return out;
}

InsufficientCombinationsError::InsufficientCombinationsError(int user, int file_id)
    : std::runtime_error("insufficient combinations: user " + std::to_string(user + 1) +
                         " cannot decode file " + std::to_string(file_id)),
      user(user),
      file_id(file_id) {}

namespace {

void push_coded(DeliveryTranscript& transcript, PartTag part, std::vector<SubfileIndex> args,
                const SubfilePartition& partition, const Library& library) {
  BitVec payload;
  for (const SubfileIndex& arg : args) {
    if (const auto* idx = partition.indices(arg)) {
      payload.xor_padded(library.file(arg.file_id).gather(*idx));
    }
  }
  if (payload.size() == 0) return;  // all-empty arguments: nothing to send
  DeliverySegment seg;
  seg.part = part;
  seg.bit_length = static_cast<std::int64_t>(payload.size());
  seg.payload = std::move(payload);
  seg.args = std::move(args);
  transcript.segments.push_back(std::move(seg));
}

void finish(DeliveryTranscript& transcript, const SystemConfig& config) {
  transcript.total_bits = 0;
  for (const auto& seg : transcript.segments) transcript.total_bits += seg.bit_length;
  transcript.normalized_rate =
      Rational(transcript.total_bits) / Rational(config.file_size_bits);
  transcript.normalized_rate.canonicalize();
}

DeliveryTranscript coded_delivery_core(const SystemConfig& config,
                                       const SubfilePartition& partition,
                                       const Library& library, const DemandProfile& profile) {
  if (config.num_users > 30)
    throw std::invalid_argument("coded delivery simulation requires K <= 30");
  const int n = config.num_files;
  const auto& orig = profile.to_original;
  auto user_bit = [&](int position) { return 1u << orig[position]; };

  DeliveryTranscript transcript;

  // Part 1: bits cached by nobody, one segment per nonempty group.
  for (int i = 1; i <= n; ++i) {
    if (profile.group_empty(i)) continue;
    push_coded(transcript, PartTag::kP1, {{i, 0u}}, partition, library);
  }

  // Part 2.1: chains inside each group.
  for (int i = 1; i <= n; ++i) {
    for (int r = profile.group_begin(i); r + 1 < profile.group_end(i); ++r) {
      push_coded(transcript, PartTag::kP2_1, {{i, user_bit(r)}, {i, user_bit(r + 1)}},
                 partition, library);
    }
  }

  // Part 2.2: per nonempty group pair, the two cross chains plus the pairing
  // of the two group leaders (the smallest coded content, Remark-2 choice).
  for (int i = 1; i < n; ++i) {
    if (profile.group_empty(i)) continue;
    for (int j = i + 1; j <= n; ++j) {
      if (profile.group_empty(j)) continue;
      for (int r = profile.group_begin(j); r + 1 < profile.group_end(j); ++r)
        push_coded(transcript, PartTag::kP2_2, {{i, user_bit(r)}, {i, user_bit(r + 1)}},
                   partition, library);
      for (int r = profile.group_begin(i); r + 1 < profile.group_end(i); ++r)
        push_coded(transcript, PartTag::kP2_2, {{j, user_bit(r)}, {j, user_bit(r + 1)}},
                   partition, library);
      push_coded(transcript, PartTag::kP2_2,
                 {{i, user_bit(profile.group_begin(j))}, {j, user_bit(profile.group_begin(i))}},
                 partition, library);
    }
  }

  // Part 3: subsets V with 3 <= |V|. Only subsets with at least one nonempty
  // argument can produce a segment; discover them from the partition map
  // instead of walking all 2^K masks.
  std::set<std::uint32_t> subsets;
  for (int f = 1; f <= n; ++f) {
    if (profile.group_empty(f)) continue;
    std::vector<int> demanders;
    for (int u = 0; u < config.num_users; ++u)
      if (profile.demands[u] == f) demanders.push_back(u);
    for (const auto& [mask, idx] : partition.by_file[f - 1]) {
      if (std::popcount(mask) < 2) continue;
      for (int u : demanders)
        if (!((mask >> u) & 1u)) subsets.insert(mask | (1u << u));
    }
  }
  for (std::uint32_t v : subsets) {
    std::vector<SubfileIndex> args;
    for (int u = 0; u < config.num_users; ++u)
      if ((v >> u) & 1u) args.push_back({profile.demands[u], v & ~(1u << u)});
    push_coded(transcript, PartTag::kP3, std::move(args), partition, library);
  }

  finish(transcript, config);
  return transcript;
}

}  // namespace

DeliveryTranscript coded_delivery_hetero(const SystemConfig& config,
                                         const SubfilePartition& partition,
                                         const Library& library, const DemandProfile& profile) {
  return coded_delivery_core(config, partition, library, profile);
}

DeliveryTranscript coded_delivery_uniform(const SystemConfig& config,
                                          const SubfilePartition& partition,
                                          const Library& library, const DemandProfile& profile) {
  if (!uniform_capacities(config))
    throw std::invalid_argument("coded_delivery_uniform requires equal cache capacities");
  return coded_delivery_core(config, partition, library, profile);
}

BitVec rd_combination_row(const SystemConfig& config, int file_id, std::int64_t row) {
  SplitRng stream = SplitRng(config.seed).split(stream_tag::kRandomRows,
                                                static_cast<std::uint64_t>(file_id),
                                                static_cast<std::uint64_t>(row));
  return BitVec::random(static_cast<std::size_t>(config.file_size_bits), stream);
}

DeliveryTranscript random_delivery(const CachePlacement& placement, const Library& library,
                                   const DemandProfile& profile, std::int64_t slack_bits) {
  const SystemConfig& config = placement.config;
  const std::int64_t f_bits = config.file_size_bits;
  if (f_bits > (1 << 14))
    throw std::invalid_argument("random delivery simulation is capped at F <= 2^14");

  DeliveryTranscript transcript;
  for (int i = 1; i <= config.num_files; ++i) {
    if (profile.group_empty(i)) continue;
    const int leader = profile.to_original[profile.group_begin(i)];
    const Rational min_cap = config.cache_capacities[leader];
    const Rational needed = (1 - min_cap / Rational(config.num_files)) * Rational(f_bits);
    const std::int64_t rows = to_int64(ceil_rational(needed)) + slack_bits;

    BitVec payload(static_cast<std::size_t>(rows));
    std::vector<BitVec> combo_rows;
    combo_rows.reserve(static_cast<std::size_t>(rows));
    for (std::int64_t r = 0; r < rows; ++r) {
      combo_rows.push_back(rd_combination_row(config, i, r));
      payload.set_bit(static_cast<std::size_t>(r),
                      combo_rows.back().parity_and(library.file(i)));
    }

    // Certify every group member: the combination matrix restricted to the
    // member's unknown bit positions must have full column rank.
    for (int r = profile.group_begin(i); r < profile.group_end(i); ++r) {
      const int user = profile.to_original[r];
      const auto& cached = placement.cached[user][i - 1];
      std::vector<std::uint32_t> unknown;
      unknown.reserve(static_cast<std::size_t>(f_bits) - cached.size());
      std::size_t c = 0;
      for (std::uint32_t b = 0; b < static_cast<std::uint32_t>(f_bits); ++b) {
        if (c < cached.size() && cached[c] == b)
          ++c;
        else
          unknown.push_back(b);
      }
      if (unknown.empty()) continue;
      Gf2Matrix restricted(rows, static_cast<std::int64_t>(unknown.size()));
      for (std::int64_t rr = 0; rr < rows; ++rr)
        restricted.fill_row_gather(rr, combo_rows[static_cast<std::size_t>(rr)], unknown);
      if (!gf2_full_column_rank(std::move(restricted)))
        throw InsufficientCombinationsError(user, i);
    }

    DeliverySegment seg;
    seg.part = PartTag::kRD;
    seg.bit_length = rows;
    seg.payload = std::move(payload);
    seg.combo = RdDescriptor{i, rows, slack_bits};
    transcript.segments.push_back(std::move(seg));
  }
  finish(transcript, config);
  return transcript;
}

nlohmann::json transcript_sidecar(const DeliveryTranscript& transcript) {
  nlohmann::json segments = nlohmann::json::array();
  for (const auto& seg : transcript.segments) {
    nlohmann::json s;
    s["part"] = part_tag_name(seg.part);
    s["bitLength"] = seg.bit_length;
    if (seg.combo) {
      s["combo"] = {{"file", seg.combo->file_id},
                    {"rows", seg.combo->rows},
                    {"slackBits", seg.combo->slack_bits}};
    } else {
      nlohmann::json args = nlohmann::json::array();
      for (const auto& arg : seg.args) {
        nlohmann::json users = nlohmann::json::array();
        for (int u = 0; u < 32; ++u)
          if ((arg.users_mask >> u) & 1u) users.push_back(u + 1);
        args.push_back({{"file", arg.file_id}, {"users", users}});
      }
      s["provenance"] = std::move(args);
    }
    segments.push_back(std::move(s));
  }
  return nlohmann::json{{"totalBits", transcript.total_bits},
                        {"normalizedRate", to_fraction_string(transcript.normalized_rate)},
                        {"segments", std::move(segments)}};
}

std::vector<std::uint8_t> transcript_payload_blob(const DeliveryTranscript& transcript) {
  std::vector<std::uint8_t> blob;
  for (const auto& seg : transcript.segments) {
    const auto bytes = seg.payload.to_bytes();
    blob.insert(blob.end(), bytes.begin(), bytes.end());
  }
  return blob;
}

DeliveryTranscript load_transcript(const nlohmann::json& sidecar,
                                   std::span<const std::uint8_t> blob,
                                   std::int64_t file_size_bits) {
  DeliveryTranscript transcript;
  std::size_t offset = 0;
  for (const auto& s : sidecar.at("segments")) {
    DeliverySegment seg;
    seg.part = part_tag_from_name(s.at("part").get<std::string>());
    seg.bit_length = s.at("bitLength").get<std::int64_t>();
    const std::size_t nbytes = static_cast<std::size_t>((seg.bit_length + 7) / 8);
    if (offset + nbytes > blob.size()) throw std::runtime_error("transcript blob truncated");
    seg.payload = BitVec::from_bytes(blob.subspan(offset, nbytes),
                                     static_cast<std::size_t>(seg.bit_length));
    offset += nbytes;
    if (s.contains("combo")) {
      const auto& c = s.at("combo");
      seg.combo = RdDescriptor{c.at("file").get<int>(), c.at("rows").get<std::int64_t>(),
                               c.at("slackBits").get<std::int64_t>()};
    } else {
      for (const auto& arg : s.at("provenance")) {
        std::uint32_t mask = 0;
        for (int u : arg.at("users")) mask |= 1u << (u - 1);
        seg.args.push_back({arg.at("file").get<int>(), mask});
      }
    }
    transcript.segments.push_back(std::move(seg));
  }
  transcript.total_bits = sidecar.at("totalBits").get<std::int64_t>();
  transcript.normalized_rate =
      Rational(transcript.total_bits) / Rational(file_size_bits);
  transcript.normalized_rate.canonicalize();
  return transcript;
}

}  // namespace cachelab
