#include "cachelab/config.hpp"

#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "cachelab/sha256.hpp"

namespace cachelab {

SystemConfig validate_config(SystemConfig config, const ConfigOptions& options) {
  if (config.num_files < 1) throw std::invalid_argument("N must be a positive integer");
  if (config.num_users < 1) throw std::invalid_argument("K must be a positive integer");
  if (config.file_size_bits < 1) throw std::invalid_argument("F must be a positive integer");
  if (static_cast<int>(config.cache_capacities.size()) != config.num_users)
    throw std::invalid_argument("M must list exactly K capacities");

  const Rational n(config.num_files);
  if (options.drop_full_cache) {
    std::vector<Rational> kept;
    for (const Rational& m : config.cache_capacities)
      if (m < n) kept.push_back(m);
    config.cache_capacities = std::move(kept);
    config.num_users = static_cast<int>(config.cache_capacities.size());
    if (config.num_users == 0)
      throw std::invalid_argument("all users cache the full library; nothing to deliver");
  }
  for (const Rational& m : config.cache_capacities) {
    if (m < 0) throw std::invalid_argument("cache capacity M_k must be non-negative");
    if (m >= n)
      throw std::invalid_argument(
          "cache capacity M_k must be < N (use --drop-full-cache to remove such users)");
  }
  return config;
}

SystemConfig config_from_json(const nlohmann::json& j, const ConfigOptions& options) {
  SystemConfig config;
  config.num_files = j.at("N").get<int>();
  config.num_users = j.at("K").get<int>();
  config.file_size_bits = j.at("F").get<std::int64_t>();
  config.seed = j.value("seed", std::uint64_t{0});
  for (const auto& entry : j.at("M")) {
    if (entry.is_string()) {
      config.cache_capacities.push_back(parse_rational(entry.get<std::string>()));
    } else if (entry.is_number_integer()) {
      config.cache_capacities.push_back(Rational(entry.get<long>()));
    } else {
      // JSON floats are binary-rounded; exactness would be silently lost.
      throw std::invalid_argument(
          "capacities must be integers or strings like \"1/8\" or \"0.125\"");
    }
  }
  if (j.contains("placement")) {
    const std::string mode = j.at("placement").get<std::string>();
    if (mode == "exact")
      config.placement_mode = PlacementMode::kExactSize;
    else if (mode == "bernoulli")
      config.placement_mode = PlacementMode::kBernoulli;
    else
      throw std::invalid_argument("placement must be \"exact\" or \"bernoulli\"");
  }
  return validate_config(std::move(config), options);
}

SystemConfig load_config_file(const std::string& path, const ConfigOptions& options) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j;
  in >> j;
  return config_from_json(j, options);
}

nlohmann::json canonical_config_json(const SystemConfig& config) {
  nlohmann::json j;
  j["N"] = config.num_files;
  j["K"] = config.num_users;
  j["F"] = config.file_size_bits;
  j["seed"] = config.seed;
  nlohmann::json m = nlohmann::json::array();
  for (const Rational& cap : config.cache_capacities) m.push_back(to_fraction_string(cap));
  j["M"] = std::move(m);
  if (config.placement_mode == PlacementMode::kBernoulli) j["placement"] = "bernoulli";
  return j;
}

std::string config_hash(const SystemConfig& config) {
  return sha256_hex(canonical_config_json(config).dump());
}

std::int64_t cached_bits_per_file(const SystemConfig& config, int user) {
  const Rational bits = config.cache_capacities.at(user) *
                        Rational(config.file_size_bits) / Rational(config.num_files);
  return to_int64(round_half_down(bits));
}

bool uniform_capacities(const SystemConfig& config) {
  for (const Rational& m : config.cache_capacities)
    if (m != config.cache_capacities.front()) return false;
  return true;
}

}  // namespace cachelab
