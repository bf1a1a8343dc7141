#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cachelab/decoder.hpp"
#include "cachelab/experiments.hpp"
#include "cachelab/persistence.hpp"

namespace {

using namespace cachelab;

struct CommonArgs {
  std::string config_path;
  std::string store_path;
  std::string gamma = "floor";
  bool drop_full_cache = false;
};

GammaConvention convention_of(const std::string& name) {
  if (name == "floor") return GammaConvention::kFloor;
  if (name == "ceil") return GammaConvention::kCeil;
  throw CLI::ValidationError("--gamma must be floor or ceil");
}

SystemConfig load(const CommonArgs& args) {
  ConfigOptions options;
  options.drop_full_cache = args.drop_full_cache;
  SystemConfig config = load_config_file(args.config_path, options);
  if (const char* env = std::getenv("CACHELAB_SEED")) {
    config.seed = std::strtoull(env, nullptr, 10);
  }
  return config;
}

/// Appends a record and reports the regression diff against the previous run
/// of the same config.
void store_and_diff(const std::string& store_path, const SystemConfig& config,
                    const nlohmann::json& report,
                    const std::optional<nlohmann::json>& validation) {
  if (store_path.empty()) return;
  ResultStore store(store_path);
  const std::string hash = config_hash(config);
  const BaselineDiff diff = store.diff_against_baseline(hash, report);
  RunRecord record;
  record.config_hash = hash;
  record.report = report;
  record.validation = validation;
  record.timestamp = iso_utc_now();
  const std::int64_t id = store.record_run(record);
  std::cerr << "stored record " << id << " (" << hash.substr(0, 12) << ")\n";
  if (!diff.baseline_found) {
    std::cerr << "baseline: none\n";
  } else if (diff.changed_fields.empty()) {
    std::cerr << "baseline: match\n";
  } else {
    std::cerr << "baseline: CHANGED";
    for (const auto& f : diff.changed_fields) std::cerr << " " << f;
    std::cerr << "\n";
  }
}

std::vector<int> parse_demand_list(const std::string& text) {
  std::vector<int> demands;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) demands.push_back(std::stoi(item));
  return demands;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact-rate calculator and bit-level simulator for decentralized "
               "coded caching with heterogeneous cache capacities"};
  app.require_subcommand(1);

  CommonArgs args;
  int trials = 1;
  std::string demands_arg = "worst";
  std::optional<std::int64_t> f_override;
  std::string spec_path, out_path = "-";

  auto add_common = [&](CLI::App* cmd, bool with_config = true) {
    if (with_config) cmd->add_option("--config", args.config_path, "config JSON")->required();
    cmd->add_option("--store", args.store_path, "append results to this JSONL store");
    cmd->add_flag("--drop-full-cache", args.drop_full_cache,
                  "remove users whose cache holds the whole library");
  };

  auto* rates = app.add_subcommand("rates", "closed-form delivery rates for one config");
  add_common(rates);
  rates->add_option("--gamma", args.gamma, "lower-bound gamma convention (floor|ceil)");

  auto* bounds = app.add_subcommand("bounds", "lower bounds and their witnesses");
  add_common(bounds);
  bounds->add_option("--gamma", args.gamma, "gamma convention (floor|ceil)");

  auto* simulate = app.add_subcommand("simulate", "bit-level placement/delivery/decode runs");
  add_common(simulate);
  simulate->add_option("--demands", demands_arg, "worst | comma list like 1,2,1,2");
  simulate->add_option("--trials", trials, "number of seeded trials")->check(CLI::PositiveNumber);
  std::int64_t f_value = 0;
  auto* f_opt = simulate->add_option("--fsize", f_value, "override file size F in bits");

  auto* sweep = app.add_subcommand("sweep", "parameter sweep to CSV");
  sweep->add_option("--spec", spec_path, "sweep spec JSON")->required();
  sweep->add_option("--out", out_path, "output CSV path ('-' = stdout)");
  sweep->add_option("--store", args.store_path, "append per-point records to this JSONL store");

  auto* verify = app.add_subcommand("verify", "run the invariant suite for one config");
  add_common(verify);
  verify->add_option("--gamma", args.gamma, "reported gamma convention (floor|ceil)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (rates->parsed() || bounds->parsed()) {
      const SystemConfig config = load(args);
      const RateReport report = rate_report(config, convention_of(args.gamma));
      nlohmann::json j = rate_report_json(report);
      if (bounds->parsed()) {
        j = nlohmann::json{{"lowerBoundNew", j["lowerBoundNew"]},
                           {"lowerBoundCutSet", j["lowerBoundCutSet"]},
                           {"rGBD", j["rGBD"]}};
      }
      std::cout << j.dump(2) << "\n";
      store_and_diff(args.store_path, config, rate_report_json(report), std::nullopt);
      return 0;
    }

    if (simulate->parsed()) {
      const SystemConfig config = load(args);
      if (*f_opt) f_override = f_value;
      std::optional<std::vector<int>> demands;
      if (demands_arg != "worst") demands = parse_demand_list(demands_arg);
      const McReport mc = monte_carlo_validate(config, demands, trials, f_override);
      const nlohmann::json j = mc_report_json(mc);
      std::cout << j.dump(2) << "\n";
      store_and_diff(args.store_path, config,
                     rate_report_json(rate_report(config, convention_of(args.gamma))),
                     std::optional<nlohmann::json>(j));
      return mc.decode_successes == mc.decode_required ? 0 : 1;
    }

    if (sweep->parsed()) {
      std::ifstream in(spec_path);
      if (!in) throw std::runtime_error("cannot open sweep spec: " + spec_path);
      nlohmann::json spec_json;
      in >> spec_json;
      const SweepSpec spec = sweep_spec_from_json(spec_json);
      const std::vector<SweepRow> rows = run_sweep(spec);
      if (out_path == "-") {
        write_sweep_csv(std::cout, spec, rows);
      } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot open output: " + out_path);
        write_sweep_csv(out, spec, rows);
      }
      if (!args.store_path.empty()) {
        for (const SweepRow& row : rows) {
          if (!row.valid) continue;
          const SystemConfig point = sweep_point_config(spec, row.x);
          store_and_diff(args.store_path, point, rate_report_json(*row.report), std::nullopt);
        }
      }
      return 0;
    }

    if (verify->parsed()) {
      const SystemConfig config = load(args);
      const bool ok = run_invariant_suite(config, convention_of(args.gamma), std::cout);
      if (!args.store_path.empty())
        store_and_diff(args.store_path, config,
                       rate_report_json(rate_report(config, convention_of(args.gamma))),
                       std::nullopt);
      return ok ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
