#include "spiderpcg/config.hpp"

#include <fstream>
#include <set>
#include <stdexcept>
#include <string>

namespace spiderpcg {

namespace {

void reject_unknown(const nlohmann::json& obj, const std::set<std::string>& known, const std::string& where)
{
    for (const auto& [key, value] : obj.items()) {
        if (!known.contains(key)) {
            throw std::runtime_error("unknown config key '" + where + key + "'");
        }
    }
}

template <typename T>
void read(const nlohmann::json& obj, const char* key, T& out, const std::string& where)
{
    if (!obj.contains(key)) {
        return;
    }
    try {
        out = obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw std::runtime_error("config key '" + where + key + "' has the wrong type");
    }
}

} // namespace

LoadedGridConfig apply_grid_config(const nlohmann::json& doc, const GridConfig& base)
{
    if (!doc.is_object()) {
        throw std::runtime_error("config must be a JSON object");
    }
    reject_unknown(doc,
                   {"methods", "initial_kinds", "targets", "repeats", "master_seed", "workers", "iteration_cap",
                    "reward_on_rounded_stress", "rl", "ga"},
                   "");
    LoadedGridConfig loaded{base, false};
    GridConfig& cfg = loaded.grid;

    try {
        if (doc.contains("methods")) {
            cfg.methods.clear();
            for (const auto& name : doc.at("methods")) {
                cfg.methods.push_back(parse_method(name.get<std::string>()));
            }
        }
        if (doc.contains("initial_kinds")) {
            cfg.initial_kinds.clear();
            for (const auto& name : doc.at("initial_kinds")) {
                cfg.initial_kinds.push_back(parse_initial_kind(name.get<std::string>()));
            }
        }
    } catch (const nlohmann::json::exception&) {
        throw std::runtime_error("config 'methods' and 'initial_kinds' must be arrays of strings");
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(e.what());
    }
    read(doc, "targets", cfg.targets, "");
    read(doc, "repeats", cfg.repeats, "");
    read(doc, "workers", cfg.workers, "");
    read(doc, "iteration_cap", cfg.options.iteration_cap, "");
    read(doc, "reward_on_rounded_stress", cfg.options.reward_on_rounded_stress, "");
    if (doc.contains("master_seed")) {
        read(doc, "master_seed", cfg.master_seed, "");
        loaded.has_seed = true;
    }

    if (doc.contains("rl")) {
        const auto& rl = doc.at("rl");
        if (!rl.is_object()) {
            throw std::runtime_error("config 'rl' must be an object");
        }
        reject_unknown(rl, {"epsilon", "learning_rate", "discount", "persist_qtable"}, "rl.");
        read(rl, "epsilon", cfg.options.rl.epsilon, "rl.");
        read(rl, "learning_rate", cfg.options.rl.learning_rate, "rl.");
        read(rl, "discount", cfg.options.rl.discount, "rl.");
        read(rl, "persist_qtable", cfg.options.rl.persist_qtable, "rl.");
    }
    if (doc.contains("ga")) {
        const auto& ga = doc.at("ga");
        if (!ga.is_object()) {
            throw std::runtime_error("config 'ga' must be an object");
        }
        reject_unknown(ga,
                       {"population_size", "mutation_prob", "pairs_per_generation", "children_per_pair",
                        "per_member_early_stop"},
                       "ga.");
        read(ga, "population_size", cfg.options.ga.population_size, "ga.");
        read(ga, "mutation_prob", cfg.options.ga.mutation_prob, "ga.");
        read(ga, "pairs_per_generation", cfg.options.ga.pairs_per_generation, "ga.");
        read(ga, "children_per_pair", cfg.options.ga.children_per_pair, "ga.");
        read(ga, "per_member_early_stop", cfg.options.ga.per_member_early_stop, "ga.");
    }

    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("invalid config: ") + e.what());
    }
    return loaded;
}

LoadedGridConfig load_grid_config(const std::filesystem::path& path, const GridConfig& base)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config file " + path.string());
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("config file is not valid JSON: ") + e.what());
    }
    return apply_grid_config(doc, base);
}

nlohmann::json grid_config_to_json(const GridConfig& cfg)
{
    nlohmann::ordered_json j;
    j["methods"] = nlohmann::json::array();
    for (Method m : cfg.methods) {
        j["methods"].push_back(std::string(method_name(m)));
    }
    j["initial_kinds"] = nlohmann::json::array();
    for (InitialKind k : cfg.initial_kinds) {
        j["initial_kinds"].push_back(std::string(initial_kind_name(k)));
    }
    j["targets"] = cfg.targets;
    j["repeats"] = cfg.repeats;
    j["master_seed"] = cfg.master_seed;
    j["workers"] = cfg.workers;
    j["iteration_cap"] = cfg.options.iteration_cap;
    j["reward_on_rounded_stress"] = cfg.options.reward_on_rounded_stress;
    j["rl"] = {{"epsilon", cfg.options.rl.epsilon},
               {"learning_rate", cfg.options.rl.learning_rate},
               {"discount", cfg.options.rl.discount},
               {"persist_qtable", cfg.options.rl.persist_qtable}};
    j["ga"] = {{"population_size", cfg.options.ga.population_size},
               {"mutation_prob", cfg.options.ga.mutation_prob},
               {"pairs_per_generation", cfg.options.ga.pairs_per_generation},
               {"children_per_pair", cfg.options.ga.children_per_pair},
               {"per_member_early_stop", cfg.options.ga.per_member_early_stop}};
    return j;
}

} // namespace spiderpcg
