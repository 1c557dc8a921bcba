#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ringmarket/two_stage.hpp"

namespace ringmarket {

/// A metric that can be undefined; `flag` is empty when the value is usable.
struct MetricValue {
    double value = 0.0;
    std::string flag;

    bool ok() const { return flag.empty(); }
};

/// |P1 - P2| relative to the mean profit. Zero for (0, 0); flagged when the
/// mean is not positive (possible off-equilibrium, where profits go negative).
inline MetricValue relative_profit_difference(double profit1, double profit2) {
    if (profit1 == 0.0 && profit2 == 0.0) return {0.0, ""};
    const double mean = (profit1 + profit2) / 2.0;
    if (!(mean > 0.0))
        return {std::numeric_limits<double>::quiet_NaN(), "profit_mean_nonpositive"};
    return {std::abs(profit1 - profit2) / mean, ""};
}

/// Revenue of the advantaged (lower-cost) firm over the other firm's.
inline MetricValue firm_revenue_ratio(double revenue_advantaged, double revenue_other) {
    if (!(revenue_other > 0.0))
        return {std::numeric_limits<double>::infinity(), "revenue_ratio_infinite"};
    return {revenue_advantaged / revenue_other, ""};
}

/// Total revenue rescaled so the no-tax baseline reads exactly 1.
inline double normalized_revenue(double revenue, double baseline_revenue) {
    if (!(baseline_revenue > 0.0))
        throw std::invalid_argument("normalized_revenue: baseline must be positive");
    return revenue / baseline_revenue;
}

struct Scenario {
    std::string label;
    TaxScheme tax;
    std::vector<double> costs;
    std::optional<StrategyGrid> grid_override;
    std::optional<Geography> geography_override;
};

namespace detail {

inline std::string compact_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

}  // namespace detail

/// The cross of tax schemes {none, cardinal, ordinal} with cost pairs
/// (100,100), (99,100), (80,100). First row is the no-tax equal-cost
/// baseline.
inline std::vector<Scenario> default_suite_scenarios(double lambda = 0.1, double gamma = 1.0) {
    const std::vector<TaxKind> kinds{TaxKind::none, TaxKind::cardinal, TaxKind::ordinal};
    const std::vector<std::vector<double>> cost_pairs{{100.0, 100.0}, {99.0, 100.0}, {80.0, 100.0}};
    std::vector<Scenario> scenarios;
    for (TaxKind kind : kinds)
        for (const std::vector<double>& costs : cost_pairs) {
            Scenario s;
            s.tax = TaxScheme{kind, lambda, gamma};
            s.costs = costs;
            s.label = std::string(to_string(kind)) + "_" + detail::compact_number(costs[0]) + "_" +
                      detail::compact_number(costs[1]);
            scenarios.push_back(std::move(s));
        }
    return scenarios;
}

struct ScenarioResult {
    Scenario scenario;
    bool solved = false;
    std::string error;
    EquilibriumResult equilibrium;
    MetricValue rel_profit_diff;
    MetricValue revenue_ratio;
    double total_revenue = std::numeric_limits<double>::quiet_NaN();
    double normalized_total = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::string> flags;
};

struct SuiteReport {
    std::string baseline_label;
    std::vector<ScenarioResult> rows;
};

inline const char* equilibrium_kind(const EquilibriumResult& r) {
    if (r.diagnostics.quantity_stage_mixed) return "mixed_quantity";
    if (r.price_stage && !r.price_stage->is_pure) return "mixed_price";
    return "pure";
}

/// Solve every scenario against the base geography/intercept and attach the
/// comparison metrics. Scenario failures become flagged rows rather than
/// aborting the suite.
inline SuiteReport run_suite(const MarketConfig& base_config, const StrategyGrid& grid,
                             unsigned threads = 0,
                             const std::vector<Scenario>& scenarios_in = {}) {
    const std::vector<Scenario> scenarios =
        scenarios_in.empty() ? default_suite_scenarios(base_config.tax.lambda, base_config.tax.gamma)
                             : scenarios_in;
    SuiteReport report;
    report.baseline_label = scenarios.front().label;

    for (const Scenario& scenario : scenarios) {
        ScenarioResult row;
        row.scenario = scenario;
        MarketConfig config = base_config;
        config.tax = scenario.tax;
        config.unit_costs = scenario.costs;
        if (scenario.geography_override) config.geography = *scenario.geography_override;
        const StrategyGrid used_grid = scenario.grid_override ? *scenario.grid_override : grid;
        try {
            row.equilibrium = solve_two_stage(config, used_grid, threads);
            row.solved = true;
            row.total_revenue = row.equilibrium.total_revenue;
            row.rel_profit_diff =
                relative_profit_difference(row.equilibrium.profits[0], row.equilibrium.profits[1]);
            const std::size_t adv = scenario.costs[0] <= scenario.costs[1] ? 0 : 1;
            row.revenue_ratio = firm_revenue_ratio(row.equilibrium.revenues[adv],
                                                   row.equilibrium.revenues[1 - adv]);
            if (!row.rel_profit_diff.ok()) row.flags.push_back(row.rel_profit_diff.flag);
            if (!row.revenue_ratio.ok()) row.flags.push_back(row.revenue_ratio.flag);
            if (row.equilibrium.diagnostics.quantity_stage_mixed)
                row.flags.push_back("mixed_quantity_stage");
        } catch (const std::exception& e) {
            row.error = e.what();
            row.flags.push_back("solver_error");
        }
        report.rows.push_back(std::move(row));
    }

    const ScenarioResult& baseline = report.rows.front();
    if (baseline.solved && baseline.total_revenue > 0.0) {
        for (ScenarioResult& row : report.rows)
            if (row.solved) row.normalized_total = normalized_revenue(row.total_revenue, baseline.total_revenue);
    } else {
        for (ScenarioResult& row : report.rows) row.flags.push_back("baseline_unsolved");
    }
    return report;
}

}  // namespace ringmarket
