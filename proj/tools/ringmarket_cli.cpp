// Command-line front end: `ringmarket run|suite|validate` with a JSON config
// file, flag-level overrides, and JSON/CSV report output.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ringmarket/config.hpp"
#include "ringmarket/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSolver = 2;
constexpr int kExitValidation = 3;

struct RunSpec {
    std::string command;
    std::string config_path;
    std::string output_path;
    std::string format;  // "", "json" or "csv"
    std::string threads = "auto";
    // overrides
    std::optional<std::string> tax_kind;
    std::optional<double> lambda;
    std::optional<double> gamma;
    std::optional<std::string> costs;
    std::optional<std::string> q_grid;
    std::optional<std::string> p_grid;
};

unsigned parse_threads(const std::string& text) {
    if (text == "auto") return 0;
    try {
        const long n = std::stol(text);
        if (n > 0) return static_cast<unsigned>(n);
    } catch (...) {
    }
    throw ringmarket::config_error("threads: expected a positive integer or 'auto'");
}

void parse_grid_spec(const std::string& text, double& min, double& max, double& step) {
    double a = 0.0, b = 0.0, s = 0.0;
    char extra = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &a, &b, &s, &extra) != 3)
        throw ringmarket::config_error("grid override: expected min:max:step");
    min = a;
    max = b;
    step = s;
}

std::string infer_format(const RunSpec& spec) {
    std::string format = spec.format;
    std::string ext;
    const std::size_t dot = spec.output_path.find_last_of('.');
    if (dot != std::string::npos) ext = spec.output_path.substr(dot + 1);
    if (format.empty()) {
        if (ext == "csv") return "csv";
        return "json";
    }
    if (!ext.empty() && (ext == "json" || ext == "csv") && ext != format)
        throw ringmarket::config_error("format '" + format + "' conflicts with output extension '." +
                                       ext + "'");
    return format;
}

ringmarket::RunConfig load_config(const RunSpec& spec) {
    std::string text;
    if (!spec.config_path.empty()) {
        std::ifstream in(spec.config_path, std::ios::binary);
        if (!in) throw ringmarket::config_error("cannot read config file: " + spec.config_path);
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    ringmarket::RunConfig config = ringmarket::parse_config(text);

    if (spec.tax_kind) config.market.tax.kind = ringmarket::tax_kind_from_string(*spec.tax_kind);
    if (spec.lambda) config.market.tax.lambda = *spec.lambda;
    if (spec.gamma) config.market.tax.gamma = *spec.gamma;
    if (spec.costs) {
        std::vector<double> costs;
        std::stringstream ss(*spec.costs);
        std::string item;
        while (std::getline(ss, item, ','))
            try {
                costs.push_back(std::stod(item));
            } catch (...) {
                throw ringmarket::config_error("costs: expected comma-separated numbers");
            }
        if (costs.size() != config.market.geography.firm_count())
            throw ringmarket::config_error("costs: need one value per firm");
        config.market.unit_costs = costs;
    }
    if (spec.q_grid)
        parse_grid_spec(*spec.q_grid, config.grid.q_min, config.grid.q_max, config.grid.q_step);
    if (spec.p_grid)
        parse_grid_spec(*spec.p_grid, config.grid.p_min, config.grid.p_max, config.grid.p_step);

    try {
        ringmarket::validate_market_config(config.market);
        ringmarket::validate_strategy_grid(config.grid);
    } catch (const std::invalid_argument& e) {
        throw ringmarket::config_error(e.what());
    }
    return config;
}

void emit(const RunSpec& spec, const std::string& body) {
    if (spec.output_path.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream out(spec.output_path, std::ios::binary | std::ios::trunc);
    if (!out) throw ringmarket::config_error("cannot write output file: " + spec.output_path);
    out << body;
    if (!out) throw ringmarket::config_error("cannot write output file: " + spec.output_path);
}

struct ValidationCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

// Built-in oracle checks: the capacity-then-price equilibrium against the
// closed-form Cournot outcome (the two coincide under this rationing rule),
// plus textbook and randomized checks of the game solver.
std::vector<ValidationCheck> run_validation(const ringmarket::RunConfig& config, unsigned threads) {
    using namespace ringmarket;
    std::vector<ValidationCheck> checks;

    {
        ValidationCheck check;
        check.name = "cournot_benchmark";
        try {
            MarketConfig market = config.market;
            market.tax.kind = TaxKind::none;
            const double u = market.demand_intercept;
            const double n = static_cast<double>(market.geography.buyer_count());
            const double c1 = market.unit_costs[0];
            const double c2 = market.unit_costs[1];
            const double q1 = n * (u - 2.0 * c1 + c2) / 3.0;
            const double q2 = n * (u - 2.0 * c2 + c1) / 3.0;
            const EquilibriumResult result = solve_two_stage(market, config.grid, threads);
            const double tol = config.grid.q_step;
            char buf[160];
            std::snprintf(buf, sizeof(buf),
                          "quantities (%.3f, %.3f), analytic (%.3f, %.3f), tolerance %.3f",
                          result.quantities[0], result.quantities[1], q1, q2, tol);
            check.detail = buf;
            check.passed = std::abs(result.quantities[0] - q1) <= tol + 1e-9 &&
                           std::abs(result.quantities[1] - q2) <= tol + 1e-9;
        } catch (const std::exception& e) {
            check.detail = e.what();
        }
        checks.push_back(std::move(check));
    }

    {
        ValidationCheck check;
        check.name = "matching_pennies_mixed";
        BimatrixGame game;
        game.rows = game.cols = 2;
        game.row_labels = game.col_labels = {0.0, 1.0};
        game.row_payoff = {1.0, -1.0, -1.0, 1.0};
        game.col_payoff = {-1.0, 1.0, 1.0, -1.0};
        try {
            const SolvedGame solved = solve_subgame(game);
            check.passed = !solved.selected.pure;
            for (double p : solved.selected.profile.row_probs)
                if (std::abs(p - 0.5) > 1e-9) check.passed = false;
            for (double p : solved.selected.profile.col_probs)
                if (std::abs(p - 0.5) > 1e-9) check.passed = false;
            check.detail = check.passed ? "uniform mix found" : "expected the (1/2, 1/2) mix";
        } catch (const std::exception& e) {
            check.detail = e.what();
        }
        checks.push_back(std::move(check));
    }

    {
        ValidationCheck check;
        check.name = "prisoners_dilemma_pure";
        BimatrixGame game;
        game.rows = game.cols = 2;
        game.row_labels = game.col_labels = {0.0, 1.0};
        game.row_payoff = {3.0, 0.0, 5.0, 1.0};
        game.col_payoff = {3.0, 5.0, 0.0, 1.0};
        try {
            const SolvedGame solved = solve_subgame(game);
            check.passed = solved.selected.pure && solved.selected.cell.row == 1 &&
                           solved.selected.cell.col == 1;
            check.detail = check.passed ? "defect/defect" : "wrong equilibrium";
        } catch (const std::exception& e) {
            check.detail = e.what();
        }
        checks.push_back(std::move(check));
    }

    {
        ValidationCheck check;
        check.name = "random_games_no_deviation";
        std::mt19937 rng(20240817u);
        std::uniform_real_distribution<double> dist(0.0, 10.0);
        bool all_ok = true;
        for (int g = 0; g < 20 && all_ok; ++g) {
            BimatrixGame game;
            game.rows = game.cols = 4;
            game.row_labels = game.col_labels = {0.0, 1.0, 2.0, 3.0};
            game.row_payoff.resize(16);
            game.col_payoff.resize(16);
            for (double& v : game.row_payoff) v = dist(rng);
            for (double& v : game.col_payoff) v = dist(rng);
            for (const CellIndex& cell : pure_nash(game)) {
                for (std::size_t r = 0; r < game.rows; ++r)
                    if (game.payoff1(r, cell.col) > game.payoff1(cell.row, cell.col)) all_ok = false;
                for (std::size_t c = 0; c < game.cols; ++c)
                    if (game.payoff2(cell.row, c) > game.payoff2(cell.row, cell.col)) all_ok = false;
            }
        }
        check.passed = all_ok;
        check.detail = all_ok ? "20 games checked" : "found a profitable deviation";
        checks.push_back(std::move(check));
    }

    return checks;
}

int dispatch(const RunSpec& spec) {
    using namespace ringmarket;
    const std::string format = infer_format(spec);
    const unsigned threads = parse_threads(spec.threads);
    const RunConfig config = load_config(spec);

    if (spec.command == "run") {
        EquilibriumResult result;
        try {
            result = solve_two_stage(config.market, config.grid, threads);
        } catch (const solver_error& e) {
            std::cerr << "solver error: " << e.what() << "\n";
            return kExitSolver;
        }
        emit(spec, format == "csv" ? run_report_csv(config.market, result)
                                   : run_report_json(result));
        return kExitOk;
    }

    if (spec.command == "suite") {
        const SuiteReport report = run_suite(config.market, config.grid, threads);
        emit(spec, format == "csv" ? suite_report_csv(report) : suite_report_json(report));
        for (const ScenarioResult& row : report.rows)
            if (!row.solved) {
                std::cerr << "scenario " << row.scenario.label << " failed: " << row.error << "\n";
                return kExitSolver;
            }
        return kExitOk;
    }

    // validate
    const std::vector<ValidationCheck> checks = run_validation(config, threads);
    bool all_passed = true;
    std::string body;
    if (format == "json") {
        nlohmann::json j = nlohmann::json::array();
        for (const ValidationCheck& c : checks) {
            j.push_back({{"check", c.name}, {"passed", c.passed}, {"detail", c.detail}});
            all_passed = all_passed && c.passed;
        }
        body = j.dump(2) + "\n";
    } else {
        for (const ValidationCheck& c : checks) {
            body += c.name;
            body += c.passed ? ",pass," : ",fail,";
            body += c.detail;
            body += '\n';
            all_passed = all_passed && c.passed;
        }
    }
    for (const ValidationCheck& c : checks)
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
    if (!spec.output_path.empty()) emit(spec, body);
    return all_passed ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-firm ring market simulator: capacity-then-price equilibria under "
                 "distance-based transaction taxes"};
    app.require_subcommand(1);

    RunSpec spec;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", spec.config_path, "JSON configuration file");
        cmd->add_option("--output", spec.output_path, "report file (stdout when omitted)");
        cmd->add_option("--format", spec.format, "json or csv")
            ->check(CLI::IsMember({"json", "csv"}));
        cmd->add_option("--threads", spec.threads, "worker threads or 'auto'");
        cmd->add_option("--tax", spec.tax_kind, "override tax kind: none|cardinal|ordinal")
            ->check(CLI::IsMember({"none", "cardinal", "ordinal"}));
        cmd->add_option("--lambda", spec.lambda, "override tax scale factor");
        cmd->add_option("--gamma", spec.gamma, "override tax exponent");
        cmd->add_option("--costs", spec.costs, "override unit costs, e.g. 99,100");
        cmd->add_option("--q-grid", spec.q_grid, "override quantity grid min:max:step");
        cmd->add_option("--p-grid", spec.p_grid, "override price grid min:max:step");
    };
    add_common(app.add_subcommand("run", "solve one scenario and report the equilibrium"));
    add_common(app.add_subcommand("suite", "run the tax/cost scenario suite"));
    add_common(app.add_subcommand("validate", "run the built-in oracle checks"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }
    spec.command = app.get_subcommands().front()->get_name();

    try {
        return dispatch(spec);
    } catch (const ringmarket::config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ringmarket::solver_error& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
