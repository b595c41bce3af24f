#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "cmab/environment.hpp"
#include "cmab/oracles.hpp"
#include "cmab/policies.hpp"
#include "cmab/simulator.hpp"
#include "cmab/smoothness.hpp"

namespace cmab {

// Built-in instances: pmc-small, pmc-extreme, linear-small, logistic-small,
// lower-bound.
std::vector<std::string> preset_names();
// Throws ConfigError for unknown names.
ProblemInstance make_preset(const std::string& name);
// Oracle a preset is meant to be run with.
OracleKind preset_oracle(const std::string& name);

struct ExperimentConfig {
    ProblemInstance instance;
    std::string instance_source;  // "preset:<name>", "file:<path>" or "inline"
    std::vector<PolicyKind> policies{PolicyKind::bc_ucb, PolicyKind::cucb};
    OracleKind oracle = OracleKind::greedy;
    std::int64_t horizon = 1000;
    std::vector<std::uint64_t> seeds;
    double alpha = 1.0;
    double beta = 1.0;
    std::filesystem::path output_dir = "out";

    // Throws ConfigError on broken invariants.
    void validate() const;
    nlohmann::json to_json() const;
};

// Experiment document:
//
//   {
//     "preset": "pmc-small" | "instance_file": "x.json" | "instance": {...},
//     "policies": ["bc-ucb", "cucb"],
//     "oracle": "greedy" | "exact",            (default: preset's, else greedy)
//     "horizon": 1000,
//     "seeds": [1, 2, 3] | {"master": 1, "count": 20},
//     "alpha": 1.0, "beta": 1.0,               (default: 1 - 1/e for greedy)
//     "output_dir": "out"
//   }
//
// Relative instance_file paths resolve against `base_dir`.
ExperimentConfig config_from_json(const nlohmann::json& doc,
                                  const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);
// Config for a preset with its default oracle and approximation factors.
ExperimentConfig preset_config(const std::string& name, int seed_count, std::int64_t horizon,
                               std::uint64_t master_seed = 1);

// Episode seeds episode_seed(master, 0..count-1).
std::vector<std::uint64_t> derive_seeds(std::uint64_t master, std::uint64_t count);

// 16 hex digits of FNV-1a over the canonical config document.
std::string config_hash(const ExperimentConfig& config);

struct BoundValues {
    std::optional<double> thm1;
    std::optional<double> cor1;
};
BoundValues compute_bounds(const ProblemInstance& instance, const GapTable& gaps,
                           std::int64_t horizon);

// Writes <output_dir>/regret.csv, manifest.json and summary.json.
//
// regret.csv starts with "# config_hash=<hash>", then the header
// "policy,seed,t,cumulative_regret" and one row per (policy, seed, t) with
// regrets printed as %.12g.
void run_experiment(const ExperimentConfig& config, unsigned workers);

struct CsvRow {
    std::string policy;
    std::uint64_t seed = 0;
    std::int64_t t = 0;
    double cumulative_regret = 0.0;
};

// Reads regret.csv back; throws DataError on schema violations or when the
// embedded hash differs from `expected_hash` (if non-empty).
std::vector<CsvRow> read_regret_csv(const std::filesystem::path& path,
                                    const std::string& expected_hash = {});

struct CertifyReport {
    SmoothnessParams estimate;
    SmoothnessParams closed_form;
};
CertifyReport certify(const RewardFamily& family, int budget, const GridSpec& grid);
void print_certify(std::ostream& os, const RewardFamily& family, int budget,
                   const CertifyReport& report);

// Worker count from CMAB_WORKERS, defaulting to the hardware concurrency.
unsigned workers_from_env();

} // namespace cmab
