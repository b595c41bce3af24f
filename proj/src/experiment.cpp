#include "cmab/experiment.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "cmab/errors.hpp"
#include "cmab/instance_io.hpp"

namespace cmab {

using nlohmann::json;

namespace {

ProblemInstance budget_instance(std::string name, FamilyKind kind, double c, int arms, int budget,
                                std::vector<double> weights, std::vector<double> params) {
    ProblemInstance inst;
    inst.name = std::move(name);
    inst.family = RewardFamily{kind, c, std::move(weights)};
    inst.params = Matrix(inst.family.weights.size(), static_cast<std::size_t>(arms), std::move(params));
    inst.actions = ActionSpace::budget(arms, budget);
    inst.validate();
    return inst;
}

} // namespace

std::vector<std::string> preset_names() {
    return {"pmc-small", "pmc-extreme", "linear-small", "logistic-small", "lower-bound"};
}

ProblemInstance make_preset(const std::string& name) {
    if (name == "pmc-small") {
        // 8 sets over 3 items; best pair {1,6}.
        return budget_instance(name, FamilyKind::pmc, 1.0, 8, 2, {1.0, 1.0, 1.0},
                               {0.70, 0.10, 0.30, 0.20, 0.45, 0.10, 0.25, 0.40,
                                0.10, 0.55, 0.20, 0.50, 0.15, 0.35, 0.20, 0.10,
                                0.20, 0.30, 0.45, 0.10, 0.20, 0.75, 0.30, 0.20});
    }
    if (name == "pmc-extreme") {
        // Two rarely covered items where arms differ by a few hundredths, and
        // one item every arm covers almost surely.
        return budget_instance(name, FamilyKind::pmc, 1.0, 8, 2, {1.0, 1.0, 1.0},
                               {0.02, 0.05, 0.03, 0.02, 0.01, 0.04, 0.02, 0.03,
                                0.03, 0.01, 0.02, 0.06, 0.02, 0.03, 0.04, 0.01,
                                0.98, 0.97, 0.98, 0.98, 0.99, 0.98, 0.97, 0.98});
    }
    if (name == "linear-small") {
        return budget_instance(name, FamilyKind::linear, 1.0, 6, 2, {1.0},
                               {0.2, 0.5, 0.35, 0.8, 0.45, 0.6});
    }
    if (name == "logistic-small") {
        return budget_instance(name, FamilyKind::logistic, 2.0, 6, 2, {1.0, 0.5},
                               {0.3, 0.7, 0.2, 0.5, 0.9, 0.4,
                                0.6, 0.2, 0.8, 0.3, 0.1, 0.5});
    }
    if (name == "lower-bound") return build_lower_bound_instance(5, 2, 0.1, {1.0});
    throw ConfigError("unknown preset '" + name + "'");
}

OracleKind preset_oracle(const std::string& name) {
    if (name == "linear-small" || name == "logistic-small") return OracleKind::greedy;
    if (name == "pmc-small" || name == "pmc-extreme" || name == "lower-bound") return OracleKind::exact;
    throw ConfigError("unknown preset '" + name + "'");
}

void ExperimentConfig::validate() const {
    instance.validate();
    if (horizon < 1) throw ConfigError("horizon must be >= 1");
    if (seeds.empty()) throw ConfigError("at least one seed is required");
    if (policies.empty()) throw ConfigError("at least one policy is required");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0,1]");
    if (!(beta > 0.0 && beta <= 1.0)) throw ConfigError("beta must lie in (0,1]");
    if (oracle == OracleKind::greedy && !instance.actions.is_budget()) {
        throw ConfigError("greedy oracle needs a budget action set");
    }
}

json ExperimentConfig::to_json() const {
    json doc;
    doc["instance_source"] = instance_source;
    doc["instance"] = instance_to_json(instance);
    json names = json::array();
    for (auto p : policies) names.push_back(to_string(p));
    doc["policies"] = names;
    doc["oracle"] = to_string(oracle);
    doc["horizon"] = horizon;
    doc["seeds"] = seeds;
    doc["alpha"] = alpha;
    doc["beta"] = beta;
    doc["output_dir"] = output_dir.string();
    return doc;
}

namespace {

double default_alpha(OracleKind oracle) {
    return oracle == OracleKind::greedy ? 1.0 - 1.0 / std::numbers::e : 1.0;
}

} // namespace

ExperimentConfig config_from_json(const json& doc, const std::filesystem::path& base_dir) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    try {
        ExperimentConfig cfg;
        std::optional<OracleKind> oracle_default;
        const int sources = static_cast<int>(doc.contains("preset")) +
                            static_cast<int>(doc.contains("instance_file")) +
                            static_cast<int>(doc.contains("instance"));
        if (sources != 1) {
            throw ConfigError("config needs exactly one of preset, instance_file, instance");
        }
        if (doc.contains("preset")) {
            const auto name = doc.at("preset").get<std::string>();
            cfg.instance = make_preset(name);
            cfg.instance_source = "preset:" + name;
            oracle_default = preset_oracle(name);
        } else if (doc.contains("instance_file")) {
            std::filesystem::path file = doc.at("instance_file").get<std::string>();
            if (file.is_relative() && !base_dir.empty()) file = base_dir / file;
            cfg.instance = load_instance(file);
            cfg.instance_source = "file:" + file.string();
        } else {
            cfg.instance = instance_from_json(doc.at("instance"));
            cfg.instance_source = "inline";
        }

        if (doc.contains("policies")) {
            cfg.policies.clear();
            for (const auto& p : doc.at("policies")) cfg.policies.push_back(parse_policy(p.get<std::string>()));
        }
        cfg.oracle = doc.contains("oracle") ? parse_oracle(doc.at("oracle").get<std::string>())
                                            : oracle_default.value_or(OracleKind::greedy);
        cfg.horizon = doc.value("horizon", std::int64_t{1000});

        const json seeds = doc.contains("seeds") ? doc.at("seeds") : json{{"master", 1}, {"count", 1}};
        if (seeds.is_array()) {
            cfg.seeds = seeds.get<std::vector<std::uint64_t>>();
        } else if (seeds.is_object()) {
            const auto count = seeds.value("count", std::int64_t{1});
            if (count < 1) throw ConfigError("seed count must be >= 1");
            cfg.seeds = derive_seeds(seeds.value("master", std::uint64_t{1}),
                                      static_cast<std::uint64_t>(count));
        } else {
            throw ConfigError("seeds must be a list or {master, count}");
        }
        cfg.alpha = doc.value("alpha", default_alpha(cfg.oracle));
        cfg.beta = doc.value("beta", 1.0);
        cfg.output_dir = doc.value("output_dir", std::string("out"));
        cfg.validate();
        return cfg;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file " + path.string() + ": " + e.what());
    }
    return config_from_json(doc, path.parent_path());
}

ExperimentConfig preset_config(const std::string& name, int seed_count, std::int64_t horizon,
                               std::uint64_t master_seed) {
    if (seed_count < 1) throw ConfigError("seed count must be >= 1");
    ExperimentConfig cfg;
    cfg.instance = make_preset(name);
    cfg.instance_source = "preset:" + name;
    cfg.oracle = preset_oracle(name);
    cfg.alpha = default_alpha(cfg.oracle);
    cfg.horizon = horizon;
    cfg.seeds = derive_seeds(master_seed, static_cast<std::uint64_t>(seed_count));
    cfg.validate();
    return cfg;
}

std::vector<std::uint64_t> derive_seeds(std::uint64_t master, std::uint64_t count) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t k = 0; k < count; ++k) out.push_back(episode_seed(master, k));
    return out;
}

std::string config_hash(const ExperimentConfig& config) {
    json doc = config.to_json();
    doc.erase("output_dir");
    const std::string text = doc.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

BoundValues compute_bounds(const ProblemInstance& instance, const GapTable& gaps,
                           std::int64_t horizon) {
    BoundValues out;
    if (!gaps.delta_max_overall || horizon < 2) return out;
    const SmoothnessParams s = closed_form_smoothness(instance.family, instance.budget());
    out.thm1 = regret_bound(instance, gaps, s, horizon, BoundMode::thm1);
    out.cor1 = regret_bound(instance, gaps, s, horizon, BoundMode::cor1);
    return out;
}

namespace {

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json arm_set_json(const ArmSet& a) {
    json ids = json::array();
    for (int j : a) ids.push_back(j + 1);
    return ids;
}

json gap_table_json(const GapTable& g) {
    json doc;
    doc["alpha"] = g.alpha;
    doc["beta"] = g.beta;
    doc["r_max"] = g.r_max;
    doc["best_action"] = arm_set_json(g.best_action);
    json actions = json::array();
    for (std::size_t a = 0; a < g.actions.size(); ++a) {
        actions.push_back({{"action", arm_set_json(g.actions[a])}, {"delta", g.delta[a]}});
    }
    doc["actions"] = actions;
    json lo = json::array();
    json hi = json::array();
    for (std::size_t j = 0; j < g.delta_min.size(); ++j) {
        lo.push_back(optional_json(g.delta_min[j]));
        hi.push_back(optional_json(g.delta_max[j]));
    }
    doc["delta_j_min"] = lo;
    doc["delta_j_max"] = hi;
    doc["delta_max"] = optional_json(g.delta_max_overall);
    return doc;
}

std::string format_g12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_json(const std::filesystem::path& path, const json& doc) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << doc.dump(2) << '\n';
}

} // namespace

void run_experiment(const ExperimentConfig& config, unsigned workers) {
    config.validate();
    const std::string hash = config_hash(config);
    const GapTable gaps = compute_gaps(config.instance, config.alpha, config.beta);
    const BoundValues bounds = compute_bounds(config.instance, gaps, config.horizon);

    std::vector<std::vector<RegretCurve>> per_policy;
    for (auto policy : config.policies) {
        EpisodeSpec spec;
        spec.policy = policy;
        spec.oracle = config.oracle;
        spec.horizon = config.horizon;
        spec.alpha = config.alpha;
        per_policy.push_back(run_episodes(config.instance, spec, config.seeds, config.beta, workers));
    }

    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + config.output_dir.string());

    {
        std::ofstream csv(config.output_dir / "regret.csv");
        if (!csv) throw ConfigError("cannot write regret.csv");
        csv << "# config_hash=" << hash << '\n' << "policy,seed,t,cumulative_regret\n";
        for (const auto& curves : per_policy) {
            for (const auto& c : curves) {
                const std::string prefix = c.meta.policy + ',' + std::to_string(c.meta.seed) + ',';
                for (std::size_t t = 0; t < c.cumulative.size(); ++t) {
                    csv << prefix << (t + 1) << ',' << format_g12(c.cumulative[t]) << '\n';
                }
            }
        }
    }

    const SmoothnessParams smooth = closed_form_smoothness(config.instance.family, config.instance.budget());
    json manifest;
    manifest["schema_version"] = 1;
    manifest["config_hash"] = hash;
    manifest["config"] = config.to_json();
    manifest["gap_table"] = gap_table_json(gaps);
    manifest["smoothness"] = {{"gamma_inf", smooth.gamma_inf}, {"gamma_g", smooth.gamma_g},
                              {"source", "closed_form"}};
    manifest["bounds"] = {{"horizon", config.horizon},
                          {"thm1", optional_json(bounds.thm1)},
                          {"cor1", optional_json(bounds.cor1)},
                          {"log_budget_factor", log_budget_factor(config.instance.budget())}};
    manifest["files"] = {{"regret_csv", "regret.csv"}, {"summary", "summary.json"}};
    write_json(config.output_dir / "manifest.json", manifest);

    json summary;
    summary["config_hash"] = hash;
    summary["horizon"] = config.horizon;
    summary["seeds"] = config.seeds.size();
    json policies = json::object();
    for (const auto& curves : per_policy) {
        const RegretSummary s = aggregate(curves);
        json q = json::object();
        for (const auto& [level, value] : s.final_quantiles) q[format_g12(level)] = value;
        policies[curves.front().meta.policy] = {{"final_mean", s.mean.back()},
                                                {"final_std", s.stddev.back()},
                                                {"final_quantiles", q}};
    }
    summary["policies"] = policies;
    summary["bounds"] = manifest["bounds"];
    write_json(config.output_dir / "summary.json", summary);
}

std::vector<CsvRow> read_regret_csv(const std::filesystem::path& path, const std::string& expected_hash) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line.rfind("# config_hash=", 0) != 0) {
        throw DataError("regret CSV lacks the config hash line");
    }
    const std::string hash = line.substr(std::string("# config_hash=").size());
    if (!expected_hash.empty() && hash != expected_hash) {
        throw DataError("regret CSV hash " + hash + " does not match " + expected_hash);
    }
    if (!std::getline(in, line) || line != "policy,seed,t,cumulative_regret") {
        throw DataError("regret CSV header mismatch");
    }
    std::vector<CsvRow> rows;
    while (std::getline(in, line)) {
        std::istringstream fields(line);
        std::string policy, seed, t, value;
        if (!std::getline(fields, policy, ',') || !std::getline(fields, seed, ',') ||
            !std::getline(fields, t, ',') || !std::getline(fields, value) || policy.empty()) {
            throw DataError("malformed regret CSV row: " + line);
        }
        try {
            rows.push_back({policy, std::stoull(seed), std::stoll(t), std::stod(value)});
        } catch (const std::exception&) {
            throw DataError("malformed regret CSV row: " + line);
        }
    }
    return rows;
}

CertifyReport certify(const RewardFamily& family, int budget, const GridSpec& grid) {
    return {estimate_smoothness(family, budget, grid), closed_form_smoothness(family, budget)};
}

void print_certify(std::ostream& os, const RewardFamily& family, int budget,
                   const CertifyReport& report) {
    os << "family " << to_string(family.kind);
    if (family.kind == FamilyKind::logistic) os << " (C=" << family.c << ")";
    os << ", K=" << budget << '\n';
    os << std::left << std::setw(12) << "" << std::setw(14) << "estimate" << "closed form\n";
    os << std::setprecision(6);
    os << std::setw(12) << "gamma_inf" << std::setw(14) << report.estimate.gamma_inf
       << report.closed_form.gamma_inf << '\n';
    os << std::setw(12) << "gamma_g" << std::setw(14) << report.estimate.gamma_g
       << report.closed_form.gamma_g << '\n';
    const double cap = 0.5 * std::sqrt(static_cast<double>(budget)) * report.estimate.gamma_inf;
    os << "estimate within closed form: "
       << (report.estimate.gamma_g <= report.closed_form.gamma_g + 1e-6 &&
                   report.estimate.gamma_inf <= report.closed_form.gamma_inf + 1e-6
               ? "yes"
               : "NO")
       << "; gamma_g <= sqrt(K)/2 * gamma_inf: " << (report.estimate.gamma_g <= cap + 1e-6 ? "yes" : "NO")
       << '\n';
}

unsigned workers_from_env() {
    if (const char* env = std::getenv("CMAB_WORKERS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && n > 0) return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

} // namespace cmab
