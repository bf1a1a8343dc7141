#pragma once

#include <nlohmann/json_fwd.hpp>

#include "cachelab/demand.hpp"

namespace cachelab {

/// Convention for the gamma term of the Han's-inequality bound: how many
/// extra caches, floor(N/l) - s or ceil(N/l) - s, get folded into the count.
/// Both are kept; floor is the reporting default, ceil is the
/// derivation-backed bound used by validity checks (floor can exceed the
/// achievable rate on some configurations).
enum class GammaConvention { kFloor, kCeil };

std::string gamma_convention_name(GammaConvention c);

struct BoundWitness {
  int s = 0;
  int l = 0;
  int gamma = 0;
  friend bool operator==(const BoundWitness&, const BoundWitness&) = default;
};

struct LowerBoundResult {
  Rational value;  // clamped at 0
  BoundWitness witness;
  GammaConvention convention = GammaConvention::kFloor;
};

/// All closed-form rates and bounds for one configuration, exact rationals.
struct RateReport {
  Rational cd;        // CODED DELIVERY rate
  Rational rd;        // RANDOM DELIVERY rate
  Rational gbd;       // min(cd, rd)
  Rational baseline;  // state-of-the-art decentralized rate R_b
  Rational uncoded;
  Rational delta_r1;
  Rational delta_r2;
  LowerBoundResult lower_bound_new;
  Rational cut_set;
};

/// Q_k: normalized bits of a file cached exclusively by user k (0-based):
/// (M_k / (N - M_k)) * prod_l (1 - M_l/N).
Rational q_value(const SystemConfig& config, int user);

/// Part-1 / part-2 gains over the baseline scheme; both zero when N >= K.
/// Capacities are sorted ascending internally.
Rational delta_r1(const SystemConfig& config);
Rational delta_r2(const SystemConfig& config);

/// R_b = sum_{i=1..K} prod_{j<=i} (1 - M_j/N), ascending capacities.
Rational rate_baseline(const SystemConfig& config);

/// Worst-case uncoded rate sum_{i=1..min(N,K)} (1 - M_i/N); equals the
/// RANDOM DELIVERY rate.
Rational rate_uncoded(const SystemConfig& config);

struct GbdRates {
  Rational cd;
  Rational rd;
  Rational gbd;
};

/// Closed-form scheme rates. For N >= K the deltas vanish and cd == baseline.
GbdRates rate_gbd(const SystemConfig& config);

/// Part-2 rates for the uniform scenario given N' distinct demands:
/// GBD sends N'(K - (N'+1)/2) coded pieces, the baseline K(K-1)/2, each of
/// length (M/N)(1-M/N)^(K-1).
Rational uniform_part2_gbd(int n_prime, int num_users, const Rational& m, int num_files);
Rational uniform_part2_baseline(int num_users, const Rational& m, int num_files);

/// Cut-set bound max_s { s - (sum_{i<=s} M_i) / floor(N/s) }, clamped at 0.
Rational cut_set_bound(const SystemConfig& config);

/// Han's-inequality bound of the heterogeneous setting, maximized over
/// (s, l); clamped at 0, witness kept for diagnostics.
LowerBoundResult lower_bound_new(const SystemConfig& config,
                                 GammaConvention convention = GammaConvention::kFloor);

RateReport rate_report(const SystemConfig& config,
                       GammaConvention convention = GammaConvention::kFloor);

/// JSON with decimal strings (10 significant digits) plus exact p/q forms.
nlohmann::json rate_report_json(const RateReport& report);

/// Asymptotic per-part rates of the CODED DELIVERY transcript for an
/// arbitrary demand profile (not only the worst case); the structural sum
/// over expected subfile sizes. Requires K <= 16 (part 3 walks 2^K subsets).
struct ExpectedCdParts {
  Rational part1;
  Rational part2;
  Rational part3;
  Rational total() const { return part1 + part2 + part3; }
};

ExpectedCdParts expected_cd_parts(const SystemConfig& config, const DemandProfile& profile);
Rational expected_cd_rate(const SystemConfig& config, const DemandProfile& profile);

/// Asymptotic RANDOM DELIVERY rate for a profile: sum over nonempty groups
/// of (1 - M_min(G_i)/N).
Rational expected_rd_rate(const SystemConfig& config, const DemandProfile& profile);

}  // namespace cachelab
