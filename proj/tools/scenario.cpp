#include "scenario.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace bdos::tools {

namespace {

using nlohmann::json;

json load_object(const std::string& path, const std::set<std::string>& allowed,
                 const std::set<std::string>& required)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open scenario file: " + path);
    }
    json doc = json::parse(in);
    if (!doc.is_object()) {
        throw std::runtime_error("scenario must be a JSON object");
    }
    for (const auto& [key, value] : doc.items()) {
        if (!allowed.count(key)) {
            throw std::runtime_error("unknown scenario key: " + key);
        }
    }
    for (const std::string& key : required) {
        if (!doc.contains(key)) {
            throw std::runtime_error("missing scenario key: " + key);
        }
    }
    return doc;
}

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::set<std::string>& required, const std::string& where)
{
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) {
            throw std::runtime_error("unknown key in " + where + ": " + key);
        }
    }
    for (const std::string& key : required) {
        if (!obj.contains(key)) {
            throw std::runtime_error("missing key in " + where + ": " + key);
        }
    }
}

std::vector<double> number_list(const json& value, const std::string& where)
{
    if (!value.is_array()) {
        throw std::runtime_error(where + " must be an array of numbers");
    }
    std::vector<double> out;
    for (const auto& v : value) {
        if (!v.is_number()) {
            throw std::runtime_error(where + " must contain only numbers");
        }
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace

SimulateScenario load_simulate_scenario(const std::string& path)
{
    json doc = load_object(path,
                           {"alpha_a", "gamma", "lambda", "block_reward", "miners",
                            "spv_extension", "rounds", "seed", "out"},
                           {"alpha_a", "gamma", "lambda", "block_reward", "miners",
                            "rounds", "seed"});
    SimulateScenario scenario;
    SimConfig& config = scenario.config;
    config.params.alpha_a = doc.at("alpha_a").get<double>();
    config.params.gamma = doc.at("gamma").get<double>();
    config.params.lambda = doc.at("lambda").get<double>();
    config.params.block_reward = doc.at("block_reward").get<double>();
    config.spv_extension = doc.value("spv_extension", false);
    config.rounds = doc.at("rounds").get<std::int64_t>();
    config.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("out")) scenario.out = doc.at("out").get<std::string>();

    if (!doc.at("miners").is_array() || doc.at("miners").empty()) {
        throw std::runtime_error("miners must be a non-empty array");
    }
    for (const auto& entry : doc.at("miners")) {
        check_keys(entry, {"alpha", "cost", "strategy"}, {"alpha", "cost", "strategy"},
                   "miners entry");
        config.params.miners.push_back(
            {entry.at("alpha").get<double>(), entry.at("cost").get<double>()});
        auto strategy = strategy_from_string(entry.at("strategy").get<std::string>());
        if (!strategy) {
            throw std::runtime_error("unknown strategy: " +
                                     entry.at("strategy").get<std::string>());
        }
        config.strategy_table.push_back(*strategy);
    }
    return scenario;
}

EquilibriumScenario load_equilibrium_scenario(const std::string& path)
{
    json doc = load_object(path,
                           {"gamma", "omega_b", "eta", "alpha_a", "miners", "out"},
                           {"gamma", "omega_b", "eta", "alpha_a", "miners"});
    EquilibriumScenario scenario;
    scenario.gamma = doc.at("gamma").get<double>();
    scenario.omega_b = number_list(doc.at("omega_b"), "omega_b");
    scenario.eta = number_list(doc.at("eta"), "eta");
    scenario.alpha_a = number_list(doc.at("alpha_a"), "alpha_a");
    if (doc.contains("out")) scenario.out = doc.at("out").get<std::string>();

    if (!doc.at("miners").is_array() || doc.at("miners").empty()) {
        throw std::runtime_error("miners must be a non-empty array");
    }
    for (const auto& entry : doc.at("miners")) {
        check_keys(entry, {"label", "power"}, {"label", "power"}, "miners entry");
        scenario.miners.rational.emplace_back(entry.at("label").get<std::string>(),
                                              entry.at("power").get<double>());
    }
    return scenario;
}

EmpiricalScenario load_empirical_scenario(const std::string& path)
{
    json doc = load_object(path,
                           {"market", "hardware", "electricity_price", "opex_overhead",
                            "gamma", "largest_rational_share", "eta", "lambda",
                            "out_prefix"},
                           {"market", "hardware", "electricity_price", "gamma",
                            "largest_rational_share", "eta"});
    EmpiricalScenario scenario;
    scenario.market_path = doc.at("market").get<std::string>();
    scenario.hardware_path = doc.at("hardware").get<std::string>();
    scenario.electricity_price = doc.at("electricity_price").get<double>();
    scenario.opex_overhead = doc.value("opex_overhead", 1.0);
    scenario.gamma = doc.at("gamma").get<double>();
    scenario.largest_rational_share = doc.at("largest_rational_share").get<double>();
    scenario.eta = number_list(doc.at("eta"), "eta");
    scenario.lambda = doc.value("lambda", 1.0 / 600.0);
    if (doc.contains("out_prefix")) {
        scenario.out_prefix = doc.at("out_prefix").get<std::string>();
    }
    return scenario;
}

}  // namespace bdos::tools
