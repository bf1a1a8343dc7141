#include "cachelab/analytics.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace cachelab {

namespace {

std::vector<Rational> sorted_capacities(const SystemConfig& config) {
  std::vector<Rational> m = config.cache_capacities;
  std::sort(m.begin(), m.end());
  return m;
}

Rational miss_product(const SystemConfig& config) {
  Rational p(1);
  const Rational n(config.num_files);
  for (const Rational& m : config.cache_capacities) p *= 1 - m / n;
  p.canonicalize();
  return p;
}

}  // namespace

std::string gamma_convention_name(GammaConvention c) {
  return c == GammaConvention::kFloor ? "floor" : "ceil";
}

Rational q_value(const SystemConfig& config, int user) {
  const Rational n(config.num_files);
  const Rational& m = config.cache_capacities.at(user);
  if (m == n) throw std::invalid_argument("Q_k undefined for M_k = N");
  Rational q = m / (n - m) * miss_product(config);
  q.canonicalize();
  return q;
}

Rational delta_r1(const SystemConfig& config) {
  if (config.num_files >= config.num_users) return Rational(0);
  Rational d = Rational(config.num_users - config.num_files) * miss_product(config);
  d.canonicalize();
  return d;
}

Rational delta_r2(const SystemConfig& config) {
  const int n = config.num_files;
  const int k = config.num_users;
  if (n >= k) return Rational(0);
  const auto m = sorted_capacities(config);
  const Rational nn(n);
  Rational sum(0);
  for (int i = 1; i <= k - n; ++i) {
    const Rational& cap = m[static_cast<std::size_t>(i + n - 1)];
    sum += Rational(i - 1) * cap / (nn - cap);
  }
  Rational d = sum * miss_product(config);
  d.canonicalize();
  return d;
}

Rational rate_baseline(const SystemConfig& config) {
  const auto m = sorted_capacities(config);
  const Rational n(config.num_files);
  Rational sum(0), running(1);
  for (const Rational& cap : m) {
    running *= 1 - cap / n;
    sum += running;
  }
  sum.canonicalize();
  return sum;
}

Rational rate_uncoded(const SystemConfig& config) {
  const auto m = sorted_capacities(config);
  const Rational n(config.num_files);
  const int limit = std::min(config.num_files, config.num_users);
  Rational sum(0);
  for (int i = 0; i < limit; ++i) sum += 1 - m[static_cast<std::size_t>(i)] / n;
  sum.canonicalize();
  return sum;
}

GbdRates rate_gbd(const SystemConfig& config) {
  GbdRates rates;
  rates.cd = rate_baseline(config) - delta_r1(config) - delta_r2(config);
  rates.rd = rate_uncoded(config);
  rates.gbd = std::min(rates.cd, rates.rd);
  rates.cd.canonicalize();
  rates.gbd.canonicalize();
  return rates;
}

Rational uniform_part2_gbd(int n_prime, int num_users, const Rational& m, int num_files) {
  if (n_prime < 1 || n_prime > std::min(num_files, num_users))
    throw std::invalid_argument("N' must lie in [1:min(N,K)]");
  const Rational ratio = m / Rational(num_files);
  Rational pieces = Rational(n_prime) * (Rational(num_users) - Rational(n_prime + 1) / 2);
  Rational r = pieces * ratio * rational_pow(1 - ratio, static_cast<unsigned>(num_users - 1));
  r.canonicalize();
  return r;
}

Rational uniform_part2_baseline(int num_users, const Rational& m, int num_files) {
  const Rational ratio = m / Rational(num_files);
  Rational pieces = Rational(static_cast<long>(num_users) * (num_users - 1)) / 2;
  Rational r = pieces * ratio * rational_pow(1 - ratio, static_cast<unsigned>(num_users - 1));
  r.canonicalize();
  return r;
}

Rational cut_set_bound(const SystemConfig& config) {
  const auto m = sorted_capacities(config);
  const int limit = std::min(config.num_files, config.num_users);
  Rational best(0);
  Rational prefix(0);
  for (int s = 1; s <= limit; ++s) {
    prefix += m[static_cast<std::size_t>(s - 1)];
    const long denom = config.num_files / s;  // floor(N/s) >= 1 since s <= N
    const Rational value = Rational(s) - prefix / Rational(denom);
    if (value > best) best = value;
  }
  best.canonicalize();
  return best;
}

LowerBoundResult lower_bound_new(const SystemConfig& config, GammaConvention convention) {
  const auto m = sorted_capacities(config);
  const int n = config.num_files;
  const int k = config.num_users;

  std::vector<Rational> prefix(static_cast<std::size_t>(k) + 1, Rational(0));
  for (int i = 0; i < k; ++i) prefix[i + 1] = prefix[i] + m[static_cast<std::size_t>(i)];

  bool first = true;
  Rational best(0);
  BoundWitness witness;
  for (int s = 1; s <= k; ++s) {
    const int l_max = (n + s - 1) / s;  // ceil(N/s)
    for (int l = 1; l <= l_max; ++l) {
      const int quotient =
          convention == GammaConvention::kFloor ? n / l : (n + l - 1) / l;
      const int gamma = std::min(std::max(quotient - s, 0), k - s);
      const int reach = s + gamma;
      Rational value = Rational(n);
      value -= Rational(s) * prefix[static_cast<std::size_t>(reach)] / Rational(reach);
      const long uncovered = std::max<long>(static_cast<long>(n) - static_cast<long>(l) * s, 0);
      value -= Rational(static_cast<long>(gamma) * uncovered) / Rational(reach);
      value -= Rational(std::max<long>(static_cast<long>(n) - static_cast<long>(k) * l, 0));
      value /= Rational(l);
      if (first || value > best) {
        best = value;
        witness = BoundWitness{s, l, gamma};
        first = false;
      }
    }
  }
  LowerBoundResult result;
  result.value = best < 0 ? Rational(0) : best;
  result.value.canonicalize();
  result.witness = witness;
  result.convention = convention;
  return result;
}

RateReport rate_report(const SystemConfig& config, GammaConvention convention) {
  RateReport report;
  const GbdRates rates = rate_gbd(config);
  report.cd = rates.cd;
  report.rd = rates.rd;
  report.gbd = rates.gbd;
  report.baseline = rate_baseline(config);
  report.uncoded = rate_uncoded(config);
  report.delta_r1 = delta_r1(config);
  report.delta_r2 = delta_r2(config);
  report.lower_bound_new = lower_bound_new(config, convention);
  report.cut_set = cut_set_bound(config);
  if (report.gbd != std::min(report.cd, report.rd))
    throw std::logic_error("rate report: gbd != min(cd, rd)");
  if (report.uncoded != report.rd)
    throw std::logic_error("rate report: uncoded rate != random-delivery rate");
  return report;
}

nlohmann::json rate_report_json(const RateReport& report) {
  auto rational_json = [](const Rational& v) {
    return nlohmann::json{{"exact", to_fraction_string(v)}, {"decimal", to_decimal_string(v)}};
  };
  nlohmann::json j;
  j["rCD"] = rational_json(report.cd);
  j["rRD"] = rational_json(report.rd);
  j["rGBD"] = rational_json(report.gbd);
  j["rBaseline"] = rational_json(report.baseline);
  j["rUncoded"] = rational_json(report.uncoded);
  j["deltaR1"] = rational_json(report.delta_r1);
  j["deltaR2"] = rational_json(report.delta_r2);
  j["lowerBoundNew"] = {{"exact", to_fraction_string(report.lower_bound_new.value)},
                        {"decimal", to_decimal_string(report.lower_bound_new.value)},
                        {"witness",
                         {{"s", report.lower_bound_new.witness.s},
                          {"l", report.lower_bound_new.witness.l},
                          {"gamma", report.lower_bound_new.witness.gamma}}},
                        {"gammaConvention",
                         gamma_convention_name(report.lower_bound_new.convention)}};
  j["lowerBoundCutSet"] = rational_json(report.cut_set);
  return j;
}

ExpectedCdParts expected_cd_parts(const SystemConfig& config, const DemandProfile& profile) {
  const int k = config.num_users;
  const int n = config.num_files;
  if (k > 16)
    throw std::invalid_argument("per-profile expected rate walks 2^K subsets; K <= 16 required");
  const Rational nn(n);

  std::vector<Rational> q(static_cast<std::size_t>(k));
  for (int u = 0; u < k; ++u) q[static_cast<std::size_t>(u)] = q_value(config, u);
  auto q_at = [&](int position) { return q[profile.to_original[position]]; };

  ExpectedCdParts parts{Rational(0), Rational(0), Rational(0)};
  parts.part1 = Rational(profile.nonempty_groups()) * miss_product(config);

  // X(2,1): in-group chain pieces; each has the length of its larger member.
  for (int i = 1; i <= n; ++i)
    for (int r = profile.group_begin(i); r + 1 < profile.group_end(i); ++r)
      parts.part2 += std::max(q_at(r), q_at(r + 1));

  // X(2,2): cross chains + leader pairing, per nonempty group pair.
  for (int i = 1; i < n; ++i) {
    if (profile.group_empty(i)) continue;
    for (int j = i + 1; j <= n; ++j) {
      if (profile.group_empty(j)) continue;
      for (int r = profile.group_begin(j); r + 1 < profile.group_end(j); ++r)
        parts.part2 += std::max(q_at(r), q_at(r + 1));
      for (int r = profile.group_begin(i); r + 1 < profile.group_end(i); ++r)
        parts.part2 += std::max(q_at(r), q_at(r + 1));
      parts.part2 += std::max(q_at(profile.group_begin(i)), q_at(profile.group_begin(j)));
    }
  }

  // Part 3: expected subfile fractions per subset mask, then the max argument
  // of every segment with |V| >= 3.
  const std::uint32_t full = (k == 32 ? ~0u : (1u << k) - 1u);
  std::vector<Rational> fraction(static_cast<std::size_t>(full) + 1);
  fraction[0] = miss_product(config);
  std::vector<Rational> ratio(static_cast<std::size_t>(k));
  for (int u = 0; u < k; ++u) {
    const Rational p = config.cache_capacities[u] / nn;
    ratio[static_cast<std::size_t>(u)] = p / (1 - p);
  }
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const int low = std::countr_zero(mask);
    fraction[mask] = fraction[mask & (mask - 1)] * ratio[static_cast<std::size_t>(low)];
  }
  for (std::uint32_t v = 0; v <= full; ++v) {
    if (std::popcount(v) < 3) continue;
    Rational longest(0);
    for (int u = 0; u < k; ++u)
      if ((v >> u) & 1u) longest = std::max(longest, fraction[v & ~(1u << u)]);
    parts.part3 += longest;
  }

  parts.part1.canonicalize();
  parts.part2.canonicalize();
  parts.part3.canonicalize();
  return parts;
}

Rational expected_cd_rate(const SystemConfig& config, const DemandProfile& profile) {
  Rational total = expected_cd_parts(config, profile).total();
  total.canonicalize();
  return total;
}

Rational expected_rd_rate(const SystemConfig& config, const DemandProfile& profile) {
  const Rational n(config.num_files);
  Rational sum(0);
  for (int i = 1; i <= config.num_files; ++i) {
    if (profile.group_empty(i)) continue;
    const int leader = profile.to_original[profile.group_begin(i)];
    sum += 1 - config.cache_capacities[leader] / n;
  }
  sum.canonicalize();
  return sum;
}

}  // namespace cachelab
