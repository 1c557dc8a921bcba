#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ringmarket/bimatrix.hpp"
#include "ringmarket/errors.hpp"
#include "ringmarket/market.hpp"
#include "ringmarket/parallel.hpp"

namespace ringmarket {

/// Discretized strategy spaces for both stages. Points are min + k*step up
/// to and including max when max is reachable.
struct StrategyGrid {
    double q_min = 0.0;
    double q_max = 160.0;
    double q_step = 5.0;
    double p_min = 90.0;
    double p_max = 120.0;
    double p_step = 0.2;
};

inline void validate_strategy_grid(const StrategyGrid& grid) {
    if (!(grid.q_step > 0.0) || !(grid.p_step > 0.0))
        throw std::invalid_argument("grid: steps must be positive");
    if (!(grid.q_min <= grid.q_max) || !(grid.p_min <= grid.p_max))
        throw std::invalid_argument("grid: min must not exceed max");
}

inline std::vector<double> grid_points(double min, double max, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("grid: step must be positive");
    if (!(min <= max)) throw std::invalid_argument("grid: min must not exceed max");
    const auto count = static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
    std::vector<double> pts;
    pts.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        double p = min + static_cast<double>(k) * step;
        if (k + 1 == count && std::abs(p - max) <= step * 1e-9) p = max;
        pts.push_back(p);
    }
    return pts;
}

inline std::vector<double> quantity_points(const StrategyGrid& grid) {
    return grid_points(grid.q_min, grid.q_max, grid.q_step);
}

inline std::vector<double> price_points(const StrategyGrid& grid) {
    return grid_points(grid.p_min, grid.p_max, grid.p_step);
}

namespace detail {

// Payoff matrices of the price game at fixed capacities, written into a
// caller-owned game to avoid reallocating per quantity pair.
inline void fill_price_subgame(const MarketConfig& config, const BuyerPricing& table,
                               std::span<const double> quantities,
                               const std::vector<double>& prices, BimatrixGame& game,
                               MarketOutcome& outcome, AllocationScratch& scratch) {
    const std::size_t n = prices.size();
    game.rows = n;
    game.cols = n;
    game.row_labels = prices;
    game.col_labels = prices;
    game.row_payoff.resize(n * n);
    game.col_payoff.resize(n * n);
    std::array<double, 2> cell_prices{};
    for (std::size_t a = 0; a < n; ++a) {
        cell_prices[0] = prices[a];
        for (std::size_t b = 0; b < n; ++b) {
            cell_prices[1] = prices[b];
            allocate_into(config, table, quantities, cell_prices, outcome, scratch);
            game.row_payoff[a * n + b] = outcome.profit[0];
            game.col_payoff[a * n + b] = outcome.profit[1];
        }
    }
}

}  // namespace detail

/// Price-stage payoff matrices for one capacity pair: entry (a, b) holds the
/// profits when firm 1 posts prices[a] and firm 2 posts prices[b].
inline BimatrixGame build_price_subgame(const MarketConfig& config,
                                        const std::vector<double>& quantities,
                                        const StrategyGrid& grid) {
    validate_strategy_grid(grid);
    const BuyerPricing table = make_buyer_pricing(config);
    if (quantities.size() != table.firms)
        throw std::invalid_argument("build_price_subgame: need one quantity per firm");
    BimatrixGame game;
    MarketOutcome outcome;
    AllocationScratch scratch;
    detail::fill_price_subgame(config, table, quantities, price_points(grid), game, outcome,
                               scratch);
    return game;
}

/// Strategy-value support of one player at one stage: singleton when pure.
struct SupportPoint {
    double value = 0.0;
    double prob = 1.0;
};

struct StageProfile {
    bool is_pure = true;
    std::array<double, 2> expected{0.0, 0.0};  // expected strategy value per firm
    std::vector<SupportPoint> support1;
    std::vector<SupportPoint> support2;
};

struct Diagnostics {
    std::size_t subgame_count = 0;
    std::size_t pure_subgames = 0;
    std::size_t mixed_subgames = 0;
    std::size_t multi_equilibrium_subgames = 0;  // selection had to discard candidates
    std::size_t quantity_candidates = 0;
    bool quantity_stage_mixed = false;
};

/// Subgame-perfect equilibrium of the capacity-then-price game on the given
/// grids. All money fields are expectations when a stage mixes.
struct EquilibriumResult {
    std::array<double, 2> quantities{0.0, 0.0};
    std::array<double, 2> prices{0.0, 0.0};
    std::array<double, 2> sold{0.0, 0.0};
    std::array<double, 2> revenues{0.0, 0.0};
    std::array<double, 2> profits{0.0, 0.0};
    double total_revenue = 0.0;
    StageProfile quantity_stage;
    /// Price-stage profile at the equilibrium capacities; absent when the
    /// quantity stage itself is mixed (each capacity cell has its own).
    std::optional<StageProfile> price_stage;
    Diagnostics diagnostics;
};

namespace detail {

struct SubgameValue {
    SolvedGame solution;
    std::array<double, 2> payoffs{0.0, 0.0};
    std::array<double, 2> revenues{0.0, 0.0};
    std::array<double, 2> sold{0.0, 0.0};
    std::array<double, 2> prices{0.0, 0.0};
};

inline StageProfile stage_profile_from(const EquilibriumCandidate& selected,
                                       const std::vector<double>& labels) {
    StageProfile out;
    out.is_pure = selected.pure;
    if (selected.pure) {
        out.expected = {labels[selected.cell.row], labels[selected.cell.col]};
        out.support1 = {{labels[selected.cell.row], 1.0}};
        out.support2 = {{labels[selected.cell.col], 1.0}};
        return out;
    }
    out.expected = {0.0, 0.0};
    for (std::size_t r = 0; r < selected.profile.row_probs.size(); ++r)
        if (selected.profile.row_probs[r] > 0.0) {
            out.support1.push_back({labels[r], selected.profile.row_probs[r]});
            out.expected[0] += labels[r] * selected.profile.row_probs[r];
        }
    for (std::size_t c = 0; c < selected.profile.col_probs.size(); ++c)
        if (selected.profile.col_probs[c] > 0.0) {
            out.support2.push_back({labels[c], selected.profile.col_probs[c]});
            out.expected[1] += labels[c] * selected.profile.col_probs[c];
        }
    return out;
}

// Expected revenue / sold quantity / posted price at the selected price
// profile, by re-clearing the market on the support cells.
inline void subgame_expectations(const MarketConfig& config, const BuyerPricing& table,
                                 std::span<const double> quantities,
                                 const std::vector<double>& prices, SubgameValue& value,
                                 MarketOutcome& outcome, AllocationScratch& scratch) {
    const EquilibriumCandidate& sel = value.solution.selected;
    value.payoffs = sel.payoffs;
    value.revenues = {0.0, 0.0};
    value.sold = {0.0, 0.0};
    value.prices = {0.0, 0.0};
    std::array<double, 2> cell_prices{};
    if (sel.pure) {
        cell_prices = {prices[sel.cell.row], prices[sel.cell.col]};
        allocate_into(config, table, quantities, cell_prices, outcome, scratch);
        value.revenues = {outcome.revenue[0], outcome.revenue[1]};
        value.sold = {outcome.sold[0], outcome.sold[1]};
        value.prices = cell_prices;
        return;
    }
    for (std::size_t a = 0; a < sel.profile.row_probs.size(); ++a) {
        const double xa = sel.profile.row_probs[a];
        if (xa == 0.0) continue;
        value.prices[0] += xa * prices[a];
        for (std::size_t b = 0; b < sel.profile.col_probs.size(); ++b) {
            const double yb = sel.profile.col_probs[b];
            if (yb == 0.0) continue;
            cell_prices = {prices[a], prices[b]};
            allocate_into(config, table, quantities, cell_prices, outcome, scratch);
            const double w = xa * yb;
            value.revenues[0] += w * outcome.revenue[0];
            value.revenues[1] += w * outcome.revenue[1];
            value.sold[0] += w * outcome.sold[0];
            value.sold[1] += w * outcome.sold[1];
        }
    }
    for (std::size_t b = 0; b < sel.profile.col_probs.size(); ++b)
        value.prices[1] += sel.profile.col_probs[b] * prices[b];
}

}  // namespace detail

inline EquilibriumResult solve_two_stage(const MarketConfig& config, const StrategyGrid& grid,
                                         unsigned threads = 0) {
    validate_market_config(config);
    validate_strategy_grid(grid);
    if (config.geography.firm_count() != 2)
        throw std::invalid_argument("solve_two_stage: the game solver handles exactly two firms");

    const std::vector<double> q_pts = quantity_points(grid);
    const std::vector<double> p_pts = price_points(grid);
    const BuyerPricing table = make_buyer_pricing(config);
    const std::size_t nq = q_pts.size();

    std::vector<detail::SubgameValue> values(nq * nq);
    std::vector<std::string> failures(nq * nq);

    parallel_for_index(nq * nq, threads, [&](std::size_t idx) {
        thread_local BimatrixGame game;
        thread_local MarketOutcome outcome;
        thread_local AllocationScratch scratch;
        const std::size_t a = idx / nq;
        const std::size_t b = idx % nq;
        try {
            const std::array<double, 2> q{q_pts[a], q_pts[b]};
            detail::fill_price_subgame(config, table, q, p_pts, game, outcome, scratch);
            detail::SubgameValue v;
            v.solution = solve_subgame(game);
            detail::subgame_expectations(config, table, q, p_pts, v, outcome, scratch);
            values[idx] = std::move(v);
        } catch (const std::exception& e) {
            failures[idx] = e.what();
        }
    });

    for (std::size_t idx = 0; idx < failures.size(); ++idx)
        if (!failures[idx].empty())
            throw solver_error("price subgame at quantities (" +
                               std::to_string(q_pts[idx / nq]) + ", " +
                               std::to_string(q_pts[idx % nq]) + ") failed: " + failures[idx]);

    EquilibriumResult result;
    result.diagnostics.subgame_count = nq * nq;
    for (const detail::SubgameValue& v : values) {
        if (v.solution.selected.pure)
            ++result.diagnostics.pure_subgames;
        else
            ++result.diagnostics.mixed_subgames;
        if (v.solution.candidate_count() > 1) ++result.diagnostics.multi_equilibrium_subgames;
    }

    BimatrixGame quantity_game;
    quantity_game.rows = nq;
    quantity_game.cols = nq;
    quantity_game.row_labels = q_pts;
    quantity_game.col_labels = q_pts;
    quantity_game.row_payoff.resize(nq * nq);
    quantity_game.col_payoff.resize(nq * nq);
    for (std::size_t idx = 0; idx < nq * nq; ++idx) {
        quantity_game.row_payoff[idx] = values[idx].payoffs[0];
        quantity_game.col_payoff[idx] = values[idx].payoffs[1];
    }

    const SolvedGame quantity_solution = solve_subgame(quantity_game);
    result.diagnostics.quantity_candidates = quantity_solution.candidate_count();
    result.quantity_stage = detail::stage_profile_from(quantity_solution.selected, q_pts);
    result.profits = quantity_solution.selected.payoffs;

    if (quantity_solution.selected.pure) {
        const std::size_t idx =
            quantity_solution.selected.cell.row * nq + quantity_solution.selected.cell.col;
        const detail::SubgameValue& v = values[idx];
        result.quantities = result.quantity_stage.expected;
        result.prices = v.prices;
        result.sold = v.sold;
        result.revenues = v.revenues;
        result.price_stage = detail::stage_profile_from(v.solution.selected, p_pts);
    } else {
        result.diagnostics.quantity_stage_mixed = true;
        result.quantities = result.quantity_stage.expected;
        const MixedProfile& mix = quantity_solution.selected.profile;
        for (std::size_t a = 0; a < nq; ++a) {
            if (mix.row_probs[a] == 0.0) continue;
            for (std::size_t b = 0; b < nq; ++b) {
                if (mix.col_probs[b] == 0.0) continue;
                const double w = mix.row_probs[a] * mix.col_probs[b];
                const detail::SubgameValue& v = values[a * nq + b];
                for (int i = 0; i < 2; ++i) {
                    result.prices[i] += w * v.prices[i];
                    result.sold[i] += w * v.sold[i];
                    result.revenues[i] += w * v.revenues[i];
                }
            }
        }
    }
    result.total_revenue = result.revenues[0] + result.revenues[1];
    return result;
}

}  // namespace ringmarket
