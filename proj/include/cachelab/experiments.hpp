#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cachelab/analytics.hpp"

namespace cachelab {

/// Exponential cache profile M_k = alpha^(K-k) * M_max, ascending in k.
std::vector<Rational> exp_cache_profile(const Rational& alpha, const Rational& m_max,
                                        int num_users);

enum class SweepVariable { kMmax, kAlpha, kUsers, kFiles };

/// One figure-style parameter sweep: hold all but one of {N, K, Mmax, alpha}
/// fixed and evaluate the analytic curves at each point of `range`.
struct SweepSpec {
  SweepVariable variable = SweepVariable::kMmax;
  std::vector<Rational> range;
  int num_files = 0;
  int num_users = 0;
  Rational m_max;
  Rational alpha;
  std::vector<std::string> curves;  // subset of the CSV columns; empty = all
  GammaConvention convention = GammaConvention::kFloor;
};

SweepSpec sweep_spec_from_json(const nlohmann::json& j);

struct SweepRow {
  Rational x;
  bool valid = false;
  std::string error;             // set when the derived config is invalid
  std::optional<RateReport> report;
};

/// Derives a config per range value; invalid configs flag the row and the
/// sweep continues.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

SystemConfig sweep_point_config(const SweepSpec& spec, const Rational& x);

/// Fixed columns: x,rGBD,rBaseline,rUncoded,lowerBoundNew,cutSetBound,
/// witness_s,witness_l. Unselected curves are left empty; flagged rows are
/// emitted as "# x=<v> invalid: <why>" comment lines.
void write_sweep_csv(std::ostream& out, const SweepSpec& spec,
                     const std::vector<SweepRow>& rows);

/// Placement + coded delivery + per-user decode, `trials` times with derived
/// seeds. Reports the measured rate against the analytic coded-delivery rate
/// (worst-case closed form, or the per-profile expectation for explicit
/// demands). Any decode failure aborts with the failing (seed, user).
struct McReport {
  int trials = 0;
  std::int64_t file_size_bits = 0;
  Rational reference;            // analytic coded-delivery rate
  Rational mean_rate;
  Rational mean_abs_rel_dev;
  Rational max_abs_rel_dev;
  std::int64_t decode_successes = 0;
  std::int64_t decode_required = 0;
  Rational mean_part1, mean_part2, mean_part3;
};

McReport monte_carlo_validate(const SystemConfig& config,
                              const std::optional<std::vector<int>>& demands, int trials,
                              std::optional<std::int64_t> file_size_override = std::nullopt);

nlohmann::json mc_report_json(const McReport& report);

/// Config-scoped invariant suite behind `verify`: analytic identities,
/// bound sandwich, placement/partition properties and an end-to-end decode
/// at desk scale. Prints one line per check; returns true iff all pass.
bool run_invariant_suite(const SystemConfig& config, GammaConvention convention,
                         std::ostream& out);

}  // namespace cachelab
