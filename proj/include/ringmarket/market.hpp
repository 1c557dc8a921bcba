#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "ringmarket/geography.hpp"
#include "ringmarket/tax.hpp"

namespace ringmarket {

/// Everything the market needs besides the strategy profile: where people
/// are, how purchases are taxed, the demand intercept u and per-firm unit
/// production costs.
struct MarketConfig {
    Geography geography;
    TaxScheme tax;
    double demand_intercept = 120.0;  // u
    std::vector<double> unit_costs;   // c_i, one per firm
};

inline void validate_market_config(const MarketConfig& config) {
    validate_geography(config.geography);
    validate_tax(config.tax);
    if (!(config.demand_intercept > 0.0))
        throw std::invalid_argument("u: must be positive");
    if (config.unit_costs.size() != config.geography.firm_count())
        throw std::invalid_argument("costs: need one unit cost per firm");
    for (double c : config.unit_costs)
        if (!(c >= 0.0))
            throw std::invalid_argument("costs: unit costs must be >= 0");
}

/// Units one buyer wants at effective price e: max(0, u - e).
inline double buyer_demand(double effective, double intercept) {
    if (!(effective >= 0.0))
        throw std::invalid_argument("buyer_demand: effective price must be >= 0");
    if (!(intercept > 0.0))
        throw std::invalid_argument("buyer_demand: intercept must be positive");
    return std::max(0.0, intercept - effective);
}

/// Fixed per-config data reused across the many allocate() calls of a
/// payoff-matrix build: tax multipliers (effective price = posted * mult)
/// and closeness ranks for every buyer-firm pair, stored buyer-major.
struct BuyerPricing {
    std::size_t firms = 0;
    std::size_t buyers = 0;
    std::vector<double> multiplier;  // [b * firms + i]
    std::vector<int> rank;           // [b * firms + i]
};

inline BuyerPricing make_buyer_pricing(const MarketConfig& config) {
    validate_market_config(config);
    BuyerPricing table;
    table.firms = config.geography.firm_count();
    table.buyers = config.geography.buyer_count();
    table.multiplier.resize(table.firms * table.buyers);
    table.rank.resize(table.firms * table.buyers);
    for (std::size_t b = 0; b < table.buyers; ++b) {
        const std::vector<double> dist = cardinal_distances(config.geography, b);
        const std::vector<int> ranks = ordinal_ranks(config.geography, b);
        for (std::size_t i = 0; i < table.firms; ++i) {
            table.multiplier[b * table.firms + i] = tax_multiplier(dist[i], ranks[i], config.tax);
            table.rank[b * table.firms + i] = ranks[i];
        }
    }
    return table;
}

/// Result of clearing the market for one (quantities, prices) profile.
/// `allocations` is buyer-major: allocations[b * firms + i] = units buyer b
/// bought from firm i. sold[i] is exactly the column sum of allocations.
struct MarketOutcome {
    std::vector<double> sold;      // q-hat
    std::vector<double> produced;  // q
    std::vector<double> revenue;   // p_i * sold_i
    std::vector<double> profit;    // revenue_i - c_i * produced_i
    std::vector<double> allocations;
    double total_revenue = 0.0;

    double allocation(std::size_t buyer, std::size_t firm, std::size_t firms) const {
        return allocations[buyer * firms + firm];
    }
};

/// Reusable buffers for allocate_into; one per thread when clearing many
/// price cells.
struct AllocationScratch {
    std::vector<std::size_t> preference;  // [b * firms + r]: r-th cheapest firm for buyer b
    std::vector<double> effective;        // [b * firms + i]
    std::vector<double> bought;           // per buyer
    std::vector<double> capacity_left;    // per firm
    std::vector<double> round_grant;      // per buyer, transient
    std::vector<double> firm_demand;      // per firm, transient
};

namespace detail {

// Buyers visit firms in order of (effective price, closeness rank, firm
// index). Each round every still-hungry buyer demands its residual
// max(0, u - e - already_bought) from its next firm; over-subscribed firms
// ration proportionally. The trailing while-loops pin down the floating-
// point corner: a firm's grants must never sum above its capacity, and
// sold[i] must equal the buyer-order column sum exactly.
inline void clear_market(const BuyerPricing& table, double intercept,
                         std::span<const double> quantities, std::span<const double> prices,
                         MarketOutcome& out, AllocationScratch& scratch) {
    const std::size_t F = table.firms;
    const std::size_t B = table.buyers;

    scratch.preference.resize(B * F);
    scratch.effective.resize(B * F);
    scratch.bought.assign(B, 0.0);
    scratch.capacity_left.assign(quantities.begin(), quantities.end());
    scratch.round_grant.assign(B, 0.0);

    out.allocations.assign(B * F, 0.0);

    for (std::size_t b = 0; b < B; ++b) {
        double* e = scratch.effective.data() + b * F;
        std::size_t* pref = scratch.preference.data() + b * F;
        const double* mult = table.multiplier.data() + b * F;
        const int* rank = table.rank.data() + b * F;
        const auto prefers = [&](std::size_t a, std::size_t c) {
            if (e[a] != e[c]) return e[a] < e[c];
            if (rank[a] != rank[c]) return rank[a] < rank[c];
            return a < c;
        };
        for (std::size_t i = 0; i < F; ++i) {
            e[i] = prices[i] * mult[i];
            pref[i] = i;
            for (std::size_t j = i; j > 0 && prefers(pref[j], pref[j - 1]); --j)
                std::swap(pref[j], pref[j - 1]);
        }
    }

    scratch.firm_demand.assign(F, 0.0);
    bool residual_possible = true;
    for (std::size_t round = 0; round < F && residual_possible; ++round) {
        residual_possible = false;
        for (std::size_t i = 0; i < F; ++i) scratch.firm_demand[i] = 0.0;
        for (std::size_t b = 0; b < B; ++b) {
            const std::size_t f = scratch.preference[b * F + round];
            double d = intercept - scratch.effective[b * F + f] - scratch.bought[b];
            if (d < 0.0) d = 0.0;
            scratch.round_grant[b] = d;
            scratch.firm_demand[f] += d;
        }
        for (std::size_t firm = 0; firm < F; ++firm) {
            const double total_demand = scratch.firm_demand[firm];
            if (total_demand <= 0.0) continue;
            const double cap = scratch.capacity_left[firm];
            double granted = total_demand;
            if (total_demand > cap) {
                // Fully demanded buyers left short keep shopping next round.
                residual_possible = true;
                const double scale = cap / total_demand;
                granted = 0.0;
                for (std::size_t b = 0; b < B; ++b)
                    if (scratch.preference[b * F + round] == firm) {
                        scratch.round_grant[b] *= scale;
                        granted += scratch.round_grant[b];
                    }
                while (granted > cap) {
                    const double fix = cap / granted;
                    granted = 0.0;
                    for (std::size_t b = 0; b < B; ++b)
                        if (scratch.preference[b * F + round] == firm) {
                            scratch.round_grant[b] *= fix;
                            granted += scratch.round_grant[b];
                        }
                }
            }
            for (std::size_t b = 0; b < B; ++b)
                if (scratch.preference[b * F + round] == firm) {
                    const double g = scratch.round_grant[b];
                    if (g > 0.0) {
                        out.allocations[b * F + firm] = g;
                        scratch.bought[b] += g;
                    }
                }
            scratch.capacity_left[firm] = cap - granted;
        }
    }

    out.produced.assign(quantities.begin(), quantities.end());
    out.sold.assign(F, 0.0);
    out.revenue.assign(F, 0.0);
    out.profit.assign(F, 0.0);
    for (std::size_t i = 0; i < F; ++i) {
        double s = 0.0;
        for (std::size_t b = 0; b < B; ++b) s += out.allocations[b * F + i];
        while (s > quantities[i]) {
            const double fix = quantities[i] / s;
            s = 0.0;
            for (std::size_t b = 0; b < B; ++b) {
                out.allocations[b * F + i] *= fix;
                s += out.allocations[b * F + i];
            }
        }
        out.sold[i] = s;
    }
    out.total_revenue = 0.0;
    for (std::size_t i = 0; i < F; ++i) {
        out.revenue[i] = prices[i] * out.sold[i];
        out.total_revenue += out.revenue[i];
    }
}

}  // namespace detail

/// Clear the market using a prebuilt pricing table. Validates the strategy
/// profile only; the table already vouches for the config.
inline void allocate_into(const MarketConfig& config, const BuyerPricing& table,
                          std::span<const double> quantities, std::span<const double> prices,
                          MarketOutcome& out, AllocationScratch& scratch) {
    if (quantities.size() != table.firms || prices.size() != table.firms)
        throw std::invalid_argument("allocate: need one quantity and one price per firm");
    for (double q : quantities)
        if (!(q >= 0.0)) throw std::invalid_argument("allocate: quantities must be >= 0");
    for (double p : prices)
        if (!(p >= 0.0)) throw std::invalid_argument("allocate: prices must be >= 0");
    detail::clear_market(table, config.demand_intercept, quantities, prices, out, scratch);
    for (std::size_t i = 0; i < table.firms; ++i)
        out.profit[i] = out.revenue[i] - config.unit_costs[i] * out.produced[i];
}

/// Convenience entry point: builds the pricing table, clears the market,
/// returns the full outcome.
inline MarketOutcome allocate(const MarketConfig& config, const std::vector<double>& quantities,
                              const std::vector<double>& prices) {
    const BuyerPricing table = make_buyer_pricing(config);
    MarketOutcome out;
    AllocationScratch scratch;
    allocate_into(config, table, quantities, prices, out, scratch);
    return out;
}

/// Profit of one firm implied by an outcome: revenue minus production cost
/// on everything produced, sold or not.
inline double profit(const MarketConfig& config, const MarketOutcome& outcome, std::size_t firm) {
    if (firm >= config.unit_costs.size() || firm >= outcome.revenue.size())
        throw std::out_of_range("profit: firm index out of range");
    return outcome.revenue[firm] - config.unit_costs[firm] * outcome.produced[firm];
}

}  // namespace ringmarket
