#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ringmarket/errors.hpp"
#include "ringmarket/market.hpp"
#include "ringmarket/two_stage.hpp"

namespace ringmarket {

struct RunConfig {
    MarketConfig market;
    StrategyGrid grid;
};

inline RunConfig default_run_config() {
    RunConfig config;
    config.market.geography = canonical_arrangement();
    config.market.tax = TaxScheme{TaxKind::none, 0.1, 1.0};
    config.market.demand_intercept = 120.0;
    config.market.unit_costs = {100.0, 100.0};
    config.grid = StrategyGrid{};
    return config;
}

namespace detail {

using json = nlohmann::json;

inline void check_keys(const json& j, const std::string& path,
                       std::initializer_list<const char*> allowed) {
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* k : allowed)
            if (item.key() == k) ok = true;
        if (!ok) throw config_error(path.empty() ? "unknown key '" + item.key() + "'"
                                                 : path + ": unknown key '" + item.key() + "'");
    }
}

inline double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw config_error(path + ": expected a number");
    return j.get<double>();
}

}  // namespace detail

/// Parse a JSON configuration document. Every field is optional; missing
/// fields fall back to the canonical arrangement, no tax (lambda 0.1,
/// gamma 1 once a taxed kind is chosen), u = 120, costs of 100 and the
/// default grids. An empty document yields the full defaults.
inline RunConfig parse_config(const std::string& text) {
    using detail::as_number;
    using detail::check_keys;
    using nlohmann::json;

    RunConfig config = default_run_config();

    std::string trimmed = text;
    trimmed.erase(0, trimmed.find_first_not_of(" \t\r\n"));
    if (trimmed.empty()) return config;

    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw config_error("config: top level must be an object");
    check_keys(doc, "", {"ring_length", "firms", "buyers", "u", "tax", "grids"});

    if (doc.contains("ring_length"))
        config.market.geography.ring_length = as_number(doc["ring_length"], "ring_length");
    const double ring = config.market.geography.ring_length;

    if (doc.contains("firms")) {
        const json& firms = doc["firms"];
        if (!firms.is_array()) throw config_error("firms: expected an array");
        config.market.geography.firm_positions.clear();
        config.market.unit_costs.clear();
        std::size_t i = 0;
        for (const json& f : firms) {
            const std::string path = "firms[" + std::to_string(i) + "]";
            if (!f.is_object()) throw config_error(path + ": expected an object");
            check_keys(f, path, {"position", "cost"});
            if (!f.contains("position")) throw config_error(path + ".position: required");
            if (!f.contains("cost")) throw config_error(path + ".cost: required");
            config.market.geography.firm_positions.push_back(
                normalize_position(as_number(f["position"], path + ".position"), ring));
            config.market.unit_costs.push_back(as_number(f["cost"], path + ".cost"));
            ++i;
        }
    }

    if (doc.contains("buyers")) {
        const json& buyers = doc["buyers"];
        if (!buyers.is_array()) throw config_error("buyers: expected an array");
        config.market.geography.buyer_positions.clear();
        std::size_t i = 0;
        for (const json& b : buyers) {
            config.market.geography.buyer_positions.push_back(
                normalize_position(as_number(b, "buyers[" + std::to_string(i) + "]"), ring));
            ++i;
        }
    }

    if (doc.contains("u")) config.market.demand_intercept = as_number(doc["u"], "u");

    if (doc.contains("tax")) {
        const json& tax = doc["tax"];
        if (!tax.is_object()) throw config_error("tax: expected an object");
        check_keys(tax, "tax", {"kind", "lambda", "gamma"});
        if (tax.contains("kind")) {
            if (!tax["kind"].is_string()) throw config_error("tax.kind: expected a string");
            try {
                config.market.tax.kind = tax_kind_from_string(tax["kind"].get<std::string>());
            } catch (const std::invalid_argument& e) {
                throw config_error(e.what());
            }
        }
        if (tax.contains("lambda")) config.market.tax.lambda = as_number(tax["lambda"], "tax.lambda");
        if (tax.contains("gamma")) config.market.tax.gamma = as_number(tax["gamma"], "tax.gamma");
    }

    if (doc.contains("grids")) {
        const json& grids = doc["grids"];
        if (!grids.is_object()) throw config_error("grids: expected an object");
        check_keys(grids, "grids", {"q_min", "q_max", "q_step", "p_min", "p_max", "p_step"});
        StrategyGrid& g = config.grid;
        if (grids.contains("q_min")) g.q_min = as_number(grids["q_min"], "grids.q_min");
        if (grids.contains("q_max")) g.q_max = as_number(grids["q_max"], "grids.q_max");
        if (grids.contains("q_step")) g.q_step = as_number(grids["q_step"], "grids.q_step");
        if (grids.contains("p_min")) g.p_min = as_number(grids["p_min"], "grids.p_min");
        if (grids.contains("p_max")) g.p_max = as_number(grids["p_max"], "grids.p_max");
        if (grids.contains("p_step")) g.p_step = as_number(grids["p_step"], "grids.p_step");
    }

    try {
        validate_market_config(config.market);
        validate_strategy_grid(config.grid);
    } catch (const std::invalid_argument& e) {
        throw config_error(e.what());
    }
    return config;
}

/// Emit a document that parse_config() reads back to an equivalent config.
inline std::string serialize_config(const RunConfig& config) {
    nlohmann::json doc;
    doc["ring_length"] = config.market.geography.ring_length;
    doc["firms"] = nlohmann::json::array();
    for (std::size_t i = 0; i < config.market.geography.firm_count(); ++i)
        doc["firms"].push_back({{"position", config.market.geography.firm_positions[i]},
                                {"cost", config.market.unit_costs[i]}});
    doc["buyers"] = config.market.geography.buyer_positions;
    doc["u"] = config.market.demand_intercept;
    doc["tax"] = {{"kind", to_string(config.market.tax.kind)},
                  {"lambda", config.market.tax.lambda},
                  {"gamma", config.market.tax.gamma}};
    doc["grids"] = {{"q_min", config.grid.q_min}, {"q_max", config.grid.q_max},
                    {"q_step", config.grid.q_step}, {"p_min", config.grid.p_min},
                    {"p_max", config.grid.p_max}, {"p_step", config.grid.p_step}};
    return doc.dump(2) + "\n";
}

}  // namespace ringmarket
