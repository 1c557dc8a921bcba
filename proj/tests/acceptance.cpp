// Acceptance suite: one line per criterion, non-zero exit on any failure.
// Argument 1 is the path to the CLI binary (used by the determinism check).

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "ringmarket/config.hpp"
#include "ringmarket/report.hpp"

using namespace ringmarket;

namespace {

int g_failures = 0;

void report(int criterion, bool passed, const std::string& detail) {
    std::printf("%s criterion %d: %s\n", passed ? "PASS" : "FAIL", criterion, detail.c_str());
    std::fflush(stdout);
    if (!passed) ++g_failures;
}

MarketConfig config_with(TaxKind kind, double lambda, std::vector<double> costs,
                         double gamma = 1.0) {
    MarketConfig config = default_run_config().market;
    config.tax = TaxScheme{kind, lambda, gamma};
    config.unit_costs = std::move(costs);
    return config;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), pattern, a, b, c);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli_path = argc > 1 ? argv[1] : "";
    const StrategyGrid grid = default_run_config().grid;
    const unsigned threads = 2;

    // Criterion 1: no-tax equal-cost equilibrium against the closed-form
    // benchmark q_i = n(u-c)/3 = 80, profit = (u - 2(u-c)/3 - c) * q = 1600/3.
    const auto t_start = std::chrono::steady_clock::now();
    const EquilibriumResult none_eq =
        solve_two_stage(config_with(TaxKind::none, 0.1, {100.0, 100.0}), grid, threads);
    const double solve_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    {
        const testoracle::CournotBenchmark bench = testoracle::analytic_cournot(120.0, 12.0, 100.0, 100.0);
        const bool q_ok = std::abs(none_eq.quantities[0] - bench.q1) <= grid.q_step &&
                          std::abs(none_eq.quantities[1] - bench.q2) <= grid.q_step;
        const bool profit_ok =
            std::abs(none_eq.profits[0] - bench.profit1) <= 0.05 * bench.profit1 &&
            std::abs(none_eq.profits[1] - bench.profit2) <= 0.05 * bench.profit2;
        const bool time_ok = solve_seconds <= 60.0;
        report(1, q_ok && profit_ok && time_ok,
               fmt("Cournot oracle: q=(%.1f, %.1f), profit=%.2f vs 533.33, ", none_eq.quantities[0],
                   none_eq.quantities[1], none_eq.profits[0]) +
                   fmt("solve took %.1f s (limit 60)", solve_seconds));
    }

    // Criterion 2: exact profit symmetry with equal costs, no tax and ordinal.
    const EquilibriumResult ordinal_eq =
        solve_two_stage(config_with(TaxKind::ordinal, 0.1, {100.0, 100.0}), grid, threads);
    {
        const MetricValue none_diff = relative_profit_difference(none_eq.profits[0], none_eq.profits[1]);
        const MetricValue ord_diff =
            relative_profit_difference(ordinal_eq.profits[0], ordinal_eq.profits[1]);
        report(2, none_diff.value == 0.0 && ord_diff.value == 0.0,
               fmt("exact symmetry: rel diff none=%.3e, ordinal=%.3e", none_diff.value,
                   ord_diff.value));
    }

    // Criterion 3: a 1%% cost edge hurts most with no tax, least with a
    // distance tax; the ordinal tax stays at or below the no-tax spread.
    {
        const EquilibriumResult none99 =
            solve_two_stage(config_with(TaxKind::none, 0.1, {99.0, 100.0}), grid, threads);
        const EquilibriumResult card99 =
            solve_two_stage(config_with(TaxKind::cardinal, 0.1, {99.0, 100.0}), grid, threads);
        const EquilibriumResult ord99 =
            solve_two_stage(config_with(TaxKind::ordinal, 0.1, {99.0, 100.0}), grid, threads);
        const double d_none = relative_profit_difference(none99.profits[0], none99.profits[1]).value;
        const double d_card = relative_profit_difference(card99.profits[0], card99.profits[1]).value;
        const double d_ord = relative_profit_difference(ord99.profits[0], ord99.profits[1]).value;
        report(3, d_none >= 2.0 * d_card && d_ord <= d_none,
               fmt("fragility ordering at (99,100): none=%.4f, cardinal=%.4f, ordinal=%.4f", d_none,
                   d_card, d_ord));
    }

    // Criterion 4: total revenue ordering with equal costs, one price step
    // of tolerance in the induced revenue.
    const EquilibriumResult cardinal_eq =
        solve_two_stage(config_with(TaxKind::cardinal, 0.1, {100.0, 100.0}), grid, threads);
    {
        const double tol = grid.p_step * (none_eq.sold[0] + none_eq.sold[1]);
        const bool ok = cardinal_eq.total_revenue < ordinal_eq.total_revenue &&
                        ordinal_eq.total_revenue <= none_eq.total_revenue + tol;
        report(4, ok,
               fmt("revenue ordering: cardinal=%.1f < ordinal=%.1f <= none=", cardinal_eq.total_revenue,
                   ordinal_eq.total_revenue) +
                   fmt("%.1f (+%.1f tolerance)", none_eq.total_revenue, tol));
    }

    // Criterion 5: a huge ordinal tax forces local monopolies; nobody buys
    // from a firm of positive rank.
    {
        const MarketConfig config = config_with(TaxKind::ordinal, 1e4, {100.0, 100.0});
        const EquilibriumResult eq = solve_two_stage(config, grid, threads);
        bool ok = eq.quantity_stage.is_pure && eq.price_stage.has_value();
        double cross_units = 0.0;
        if (ok) {
            const std::vector<double> q{eq.quantities[0], eq.quantities[1]};
            for (const SupportPoint& s1 : eq.price_stage->support1)
                for (const SupportPoint& s2 : eq.price_stage->support2) {
                    const MarketOutcome out = allocate(config, q, {s1.value, s2.value});
                    for (std::size_t b = 0; b < config.geography.buyer_count(); ++b) {
                        const std::vector<int> ranks = ordinal_ranks(config.geography, b);
                        for (std::size_t i = 0; i < 2; ++i)
                            if (ranks[i] > 0) cross_units += out.allocation(b, i, 2);
                    }
                }
            ok = cross_units == 0.0;
        }
        report(5, ok, fmt("local monopolisation at lambda=1e4: cross-rank units=%.3e", cross_units));
    }

    // Criterion 6: lambda = 0 reproduces the no-tax result bit for bit.
    {
        const std::string none_report = run_report_json(none_eq);
        const std::string card0 = run_report_json(
            solve_two_stage(config_with(TaxKind::cardinal, 0.0, {100.0, 100.0}), grid, threads));
        const std::string ord0 = run_report_json(
            solve_two_stage(config_with(TaxKind::ordinal, 0.0, {100.0, 100.0}), grid, threads));
        report(6, none_report == card0 && none_report == ord0,
               "lambda=0 cardinal and ordinal reports are byte-identical to kind=none");
    }

    // Criterion 7: solver oracles. 100 random 4x4 games against exhaustive
    // deviation checks, plus the textbook closed forms.
    {
        const auto t0 = std::chrono::steady_clock::now();
        bool ok = true;
        std::string why = "all solver oracles passed";
        std::mt19937 rng(31707u);
        std::uniform_real_distribution<double> payoff(0.0, 10.0);
        for (int trial = 0; trial < 100 && ok; ++trial) {
            BimatrixGame game;
            game.rows = game.cols = 4;
            game.row_labels = game.col_labels = {0.0, 1.0, 2.0, 3.0};
            game.row_payoff.resize(16);
            game.col_payoff.resize(16);
            for (double& v : game.row_payoff) v = payoff(rng);
            for (double& v : game.col_payoff) v = payoff(rng);

            const std::vector<CellIndex> pure = pure_nash(game);
            const auto brute = testoracle::brute_force_pure_cells(game);
            if (pure.size() != brute.size()) {
                ok = false;
                why = "pure_nash disagreed with the exhaustive scan";
                break;
            }
            for (std::size_t i = 0; i < pure.size(); ++i)
                if (pure[i].row != brute[i].first || pure[i].col != brute[i].second) {
                    ok = false;
                    why = "pure_nash disagreed with the exhaustive scan";
                }
            for (const MixedProfile& p : mixed_nash(game)) {
                const testoracle::ProfileCheck check = testoracle::check_profile(game, p);
                if (check.indifference_gap > 1e-9 || check.outside_gain > 1e-9) {
                    ok = false;
                    why = fmt("mixed profile failed verification: gap=%.2e, gain=%.2e",
                              check.indifference_gap, check.outside_gain);
                }
            }
        }
        if (ok) {
            BimatrixGame pennies = testoracle::make_game_2x2({1.0, -1.0, -1.0, 1.0},
                                                             {-1.0, 1.0, 1.0, -1.0});
            const SolvedGame mp = solve_subgame(pennies);
            if (mp.selected.pure) {
                ok = false;
                why = "matching pennies should have no pure equilibrium";
            } else {
                for (double v : mp.selected.profile.row_probs)
                    if (std::abs(v - 0.5) > 1e-12) ok = false;
                for (double v : mp.selected.profile.col_probs)
                    if (std::abs(v - 0.5) > 1e-12) ok = false;
                if (!ok) why = "matching pennies mix is not (1/2, 1/2)";
            }
            BimatrixGame pd =
                testoracle::make_game_2x2({3.0, 0.0, 5.0, 1.0}, {3.0, 5.0, 0.0, 1.0});
            const SolvedGame pd_solved = solve_subgame(pd);
            if (!pd_solved.selected.pure || pd_solved.selected.cell.row != 1 ||
                pd_solved.selected.cell.col != 1) {
                ok = false;
                why = "prisoner's dilemma did not resolve to defect/defect";
            }
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (ok && seconds > 10.0) {
            ok = false;
            why = fmt("solver oracles exceeded the 10 s budget: %.1f s", seconds);
        }
        report(7, ok, why + fmt(" (%.2f s)", seconds));
    }

    // Criterion 8: with two firms the ordinal scheme cannot depend on gamma.
    {
        const std::string g_half = run_report_json(solve_two_stage(
            config_with(TaxKind::ordinal, 0.1, {100.0, 100.0}, 0.5), grid, threads));
        const std::string g_one = run_report_json(ordinal_eq);
        const std::string g_two = run_report_json(solve_two_stage(
            config_with(TaxKind::ordinal, 0.1, {100.0, 100.0}, 2.0), grid, threads));
        report(8, g_half == g_one && g_two == g_one,
               "ordinal reports identical for gamma in {0.5, 1, 2}");
    }

    // Criterion 9: the suite command is deterministic across repeated runs
    // and across thread counts, byte for byte.
    {
        bool ok = !cli_path.empty();
        std::string why = ok ? "" : "CLI path not supplied";
        const std::string out1 = "acceptance_suite_t8_a.csv";
        const std::string out2 = "acceptance_suite_t8_b.csv";
        const std::string out3 = "acceptance_suite_t1.csv";
        if (ok) {
            const std::string base = "\"" + cli_path + "\" suite --format csv --output ";
            ok = std::system((base + out1 + " --threads 8").c_str()) == 0 &&
                 std::system((base + out2 + " --threads 8").c_str()) == 0 &&
                 std::system((base + out3 + " --threads 1").c_str()) == 0;
            if (!ok) why = "suite invocation failed";
        }
        if (ok) {
            const std::string a = read_file(out1);
            const std::string b = read_file(out2);
            const std::string c = read_file(out3);
            ok = !a.empty() && a == b && a == c;
            why = ok ? "suite outputs byte-identical across reruns and thread counts 1/8"
                     : "suite outputs differ";
            std::remove(out1.c_str());
            std::remove(out2.c_str());
            std::remove(out3.c_str());
        }
        report(9, ok, why);
    }

    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
