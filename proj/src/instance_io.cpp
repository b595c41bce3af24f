#include "cmab/instance_io.hpp"

#include <fstream>

#include "cmab/errors.hpp"

namespace cmab {

using nlohmann::json;

namespace {

template <typename T>
T required(const json& doc, const char* key) {
    if (!doc.contains(key)) throw ConfigError(std::string("instance is missing '") + key + "'");
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("instance field '") + key + "': " + e.what());
    }
}

} // namespace

ProblemInstance instance_from_json(const json& doc) {
    if (!doc.is_object()) throw ConfigError("instance document must be an object");
    const int version = doc.value("schema_version", kInstanceSchemaVersion);
    if (version != kInstanceSchemaVersion) {
        throw ConfigError("unsupported instance schema_version " + std::to_string(version));
    }

    ProblemInstance inst;
    inst.name = doc.value("name", std::string("inline"));
    inst.family.kind = parse_family(required<std::string>(doc, "family"));
    inst.family.c = doc.value("C", 1.0);
    inst.family.weights = required<std::vector<double>>(doc, "weights");

    const int arms = required<int>(doc, "L");
    const int budget = required<int>(doc, "K");
    const int items = required<int>(doc, "M");
    if (arms < 1 || budget < 1 || items < 1) throw ConfigError("L, K and M must be positive");
    if (static_cast<int>(inst.family.weights.size()) != items) {
        throw ConfigError("weights must have M entries");
    }
    auto params = required<std::vector<double>>(doc, "params");
    if (params.size() != static_cast<std::size_t>(items) * static_cast<std::size_t>(arms)) {
        throw ConfigError("params must hold M*L entries in row-major order");
    }
    inst.params = Matrix(static_cast<std::size_t>(items), static_cast<std::size_t>(arms),
                         std::move(params));

    const json set = doc.contains("action_set") ? doc.at("action_set") : json("budget");
    if (set.is_string()) {
        if (set.get<std::string>() != "budget") {
            throw ConfigError("action_set must be \"budget\" or a list of arm lists");
        }
        inst.actions = ActionSpace::budget(arms, budget);
    } else if (set.is_array()) {
        std::vector<ArmSet> actions;
        for (const auto& entry : set) {
            ArmSet a;
            for (const auto& id : entry) a.push_back(id.get<int>() - 1);
            actions.push_back(std::move(a));
        }
        inst.actions = ActionSpace::explicit_list(arms, budget, std::move(actions));
    } else {
        throw ConfigError("action_set must be \"budget\" or a list of arm lists");
    }
    inst.correlation = parse_correlation(doc.value("correlation", std::string("independent")));
    inst.validate();
    return inst;
}

json instance_to_json(const ProblemInstance& inst) {
    json doc;
    doc["schema_version"] = kInstanceSchemaVersion;
    doc["name"] = inst.name;
    doc["family"] = to_string(inst.family.kind);
    if (inst.family.kind == FamilyKind::logistic) doc["C"] = inst.family.c;
    doc["L"] = inst.arms();
    doc["K"] = inst.budget();
    doc["M"] = inst.items();
    doc["weights"] = inst.family.weights;
    doc["params"] = inst.params.data();
    if (inst.actions.is_budget()) {
        doc["action_set"] = "budget";
    } else {
        json list = json::array();
        for (const auto& a : inst.actions.explicit_actions()) {
            json ids = json::array();
            for (int j : a) ids.push_back(j + 1);
            list.push_back(ids);
        }
        doc["action_set"] = list;
    }
    doc["correlation"] = to_string(inst.correlation);
    return doc;
}

ProblemInstance load_instance(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open instance file " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("instance file " + path.string() + ": " + e.what());
    }
    return instance_from_json(doc);
}

} // namespace cmab
