#pragma once

#include <cmath>
#include <cstdio>
#include <string>

#include <json.hpp>

#include "ringmarket/config.hpp"
#include "ringmarket/experiments.hpp"

namespace ringmarket {

namespace detail {

// Fixed six-decimal formatting keeps report bytes reproducible. Non-finite
// values become empty cells; their story lives in the flags column.
inline std::string format_fixed(double v) {
    if (!std::isfinite(v)) return "";
    if (v == 0.0) v = 0.0;  // collapse negative zero
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

inline std::string join_flags(const std::vector<std::string>& flags) {
    std::string out;
    for (const std::string& f : flags) {
        if (!out.empty()) out += ';';
        out += f;
    }
    return out;
}

inline nlohmann::json number_or_null(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

inline nlohmann::json stage_to_json(const StageProfile& stage) {
    nlohmann::json j;
    j["kind"] = stage.is_pure ? "pure" : "mixed";
    j["expected"] = {stage.expected[0], stage.expected[1]};
    nlohmann::json s1 = nlohmann::json::array();
    for (const SupportPoint& p : stage.support1) s1.push_back({{"value", p.value}, {"prob", p.prob}});
    nlohmann::json s2 = nlohmann::json::array();
    for (const SupportPoint& p : stage.support2) s2.push_back({{"value", p.value}, {"prob", p.prob}});
    j["support1"] = std::move(s1);
    j["support2"] = std::move(s2);
    return j;
}

}  // namespace detail

inline nlohmann::json equilibrium_to_json(const EquilibriumResult& r) {
    nlohmann::json j;
    j["quantities"] = {r.quantities[0], r.quantities[1]};
    j["prices"] = {r.prices[0], r.prices[1]};
    j["sold"] = {r.sold[0], r.sold[1]};
    j["revenues"] = {r.revenues[0], r.revenues[1]};
    j["profits"] = {r.profits[0], r.profits[1]};
    j["total_revenue"] = r.total_revenue;
    j["equilibrium_kind"] = equilibrium_kind(r);
    j["quantity_stage"] = detail::stage_to_json(r.quantity_stage);
    j["price_stage"] = r.price_stage ? detail::stage_to_json(*r.price_stage) : nlohmann::json(nullptr);
    j["diagnostics"] = {{"subgames", r.diagnostics.subgame_count},
                        {"pure_subgames", r.diagnostics.pure_subgames},
                        {"mixed_subgames", r.diagnostics.mixed_subgames},
                        {"multi_equilibrium_subgames", r.diagnostics.multi_equilibrium_subgames},
                        {"quantity_candidates", r.diagnostics.quantity_candidates},
                        {"quantity_stage_mixed", r.diagnostics.quantity_stage_mixed}};
    return j;
}

inline std::string run_report_json(const EquilibriumResult& result) {
    return equilibrium_to_json(result).dump(2) + "\n";
}

inline const char* csv_header() {
    return "label,tax_kind,c1,c2,q1,q2,p1,p2,profit1,profit2,rel_profit_diff,"
           "revenue_total,revenue_normalized,revenue_ratio,equilibrium_kind,flags";
}

namespace detail {

inline std::string csv_row(const std::string& label, const TaxScheme& tax,
                           const std::vector<double>& costs, const ScenarioResult& row) {
    using detail::format_fixed;
    std::string line = label;
    line += ',';
    line += to_string(tax.kind);
    line += ',';
    line += format_fixed(costs[0]);
    line += ',';
    line += format_fixed(costs[1]);
    const EquilibriumResult& e = row.equilibrium;
    if (row.solved) {
        line += ',' + format_fixed(e.quantities[0]) + ',' + format_fixed(e.quantities[1]);
        line += ',' + format_fixed(e.prices[0]) + ',' + format_fixed(e.prices[1]);
        line += ',' + format_fixed(e.profits[0]) + ',' + format_fixed(e.profits[1]);
        line += ',' + format_fixed(row.rel_profit_diff.ok() ? row.rel_profit_diff.value
                                                            : std::nan(""));
        line += ',' + format_fixed(row.total_revenue);
        line += ',' + format_fixed(row.normalized_total);
        line += ',' + format_fixed(row.revenue_ratio.ok() ? row.revenue_ratio.value : std::nan(""));
        line += ',';
        line += equilibrium_kind(e);
    } else {
        line += ",,,,,,,,,,,";
    }
    line += ',' + join_flags(row.flags);
    return line;
}

}  // namespace detail

inline std::string suite_report_csv(const SuiteReport& report) {
    std::string out = csv_header();
    out += '\n';
    for (const ScenarioResult& row : report.rows) {
        out += detail::csv_row(row.scenario.label, row.scenario.tax, row.scenario.costs, row);
        out += '\n';
    }
    return out;
}

inline nlohmann::json suite_report_to_json(const SuiteReport& report) {
    nlohmann::json j;
    j["baseline"] = report.baseline_label;
    nlohmann::json rows = nlohmann::json::array();
    for (const ScenarioResult& row : report.rows) {
        nlohmann::json r;
        r["label"] = row.scenario.label;
        r["tax_kind"] = to_string(row.scenario.tax.kind);
        r["c1"] = row.scenario.costs[0];
        r["c2"] = row.scenario.costs[1];
        r["solved"] = row.solved;
        if (row.solved) {
            const EquilibriumResult& e = row.equilibrium;
            r["q1"] = e.quantities[0];
            r["q2"] = e.quantities[1];
            r["p1"] = e.prices[0];
            r["p2"] = e.prices[1];
            r["profit1"] = e.profits[0];
            r["profit2"] = e.profits[1];
            r["rel_profit_diff"] =
                row.rel_profit_diff.ok() ? detail::number_or_null(row.rel_profit_diff.value)
                                         : nlohmann::json(nullptr);
            r["revenue_total"] = detail::number_or_null(row.total_revenue);
            r["revenue_normalized"] = detail::number_or_null(row.normalized_total);
            r["revenue_ratio"] = row.revenue_ratio.ok()
                                     ? detail::number_or_null(row.revenue_ratio.value)
                                     : nlohmann::json(nullptr);
            r["equilibrium_kind"] = equilibrium_kind(e);
        } else {
            r["error"] = row.error;
        }
        r["flags"] = row.flags;
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    return j;
}

inline std::string suite_report_json(const SuiteReport& report) {
    return suite_report_to_json(report).dump(2) + "\n";
}

/// One-row CSV mirroring the suite columns, for `run` invocations.
inline std::string run_report_csv(const MarketConfig& config, const EquilibriumResult& result) {
    ScenarioResult row;
    row.scenario.label = "run";
    row.scenario.tax = config.tax;
    row.scenario.costs = config.unit_costs;
    row.solved = true;
    row.equilibrium = result;
    row.total_revenue = result.total_revenue;
    row.rel_profit_diff = relative_profit_difference(result.profits[0], result.profits[1]);
    const std::size_t adv = config.unit_costs[0] <= config.unit_costs[1] ? 0 : 1;
    row.revenue_ratio = firm_revenue_ratio(result.revenues[adv], result.revenues[1 - adv]);
    if (!row.rel_profit_diff.ok()) row.flags.push_back(row.rel_profit_diff.flag);
    if (!row.revenue_ratio.ok()) row.flags.push_back(row.revenue_ratio.flag);
    std::string out = csv_header();
    out += '\n';
    out += detail::csv_row(row.scenario.label, config.tax, config.unit_costs, row);
    out += '\n';
    return out;
}

}  // namespace ringmarket
