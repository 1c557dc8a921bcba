#include <catch2/catch_amalgamated.hpp>

#include "ringmarket/config.hpp"
#include "ringmarket/report.hpp"

using namespace ringmarket;

TEST_CASE("empty config yields full defaults") {
    for (const std::string text : {"", "  \n", "{}"}) {
        const RunConfig config = parse_config(text);
        CHECK(config.market.tax.kind == TaxKind::none);
        CHECK(config.market.tax.lambda == 0.1);
        CHECK(config.market.tax.gamma == 1.0);
        CHECK(config.market.demand_intercept == 120.0);
        CHECK(config.market.unit_costs == std::vector<double>{100.0, 100.0});
        CHECK(config.market.geography.firm_positions == std::vector<double>{0.0, 0.5});
        CHECK(config.market.geography.buyer_count() == 12);
        CHECK(config.grid.q_min == 0.0);
        CHECK(config.grid.q_max == 160.0);
        CHECK(config.grid.q_step == 5.0);
        CHECK(config.grid.p_min == 90.0);
        CHECK(config.grid.p_max == 120.0);
        CHECK(config.grid.p_step == 0.2);
    }
}

TEST_CASE("config fields parse and validate") {
    const RunConfig ordinal = parse_config(R"({"tax": {"kind": "ordinal", "lambda": 0.1}})");
    CHECK(ordinal.market.tax.kind == TaxKind::ordinal);
    CHECK(ordinal.market.tax.lambda == 0.1);

    const RunConfig custom = parse_config(R"({
        "ring_length": 2.0,
        "firms": [{"position": 0.0, "cost": 95.0}, {"position": 1.0, "cost": 105.0}],
        "buyers": [0.25, 0.75, 1.25, 1.75],
        "u": 130.0,
        "tax": {"kind": "cardinal", "lambda": 0.2, "gamma": 2.0},
        "grids": {"q_min": 10.0, "q_max": 50.0, "q_step": 2.0}
    })");
    CHECK(custom.market.geography.ring_length == 2.0);
    CHECK(custom.market.unit_costs == std::vector<double>{95.0, 105.0});
    CHECK(custom.market.geography.buyer_count() == 4);
    CHECK(custom.market.demand_intercept == 130.0);
    CHECK(custom.market.tax.gamma == 2.0);
    CHECK(custom.grid.q_step == 2.0);
    CHECK(custom.grid.p_step == 0.2);  // untouched default

    // a position equal to the ring length wraps to zero
    const RunConfig wrapped = parse_config(R"({"buyers": [1.0, 0.3]})");
    CHECK(wrapped.market.geography.buyer_positions[0] == 0.0);
}

TEST_CASE("config errors name the offending field") {
    auto message_of = [](const std::string& text) {
        try {
            parse_config(text);
        } catch (const config_error& e) {
            return std::string(e.what());
        }
        return std::string();
    };

    CHECK(message_of(R"({"tax": {"lambda": -1}})").find("lambda") != std::string::npos);
    CHECK(message_of(R"({"tax": {"gamma": 0}})").find("gamma") != std::string::npos);
    CHECK(message_of(R"({"u": "high"})").find("u") != std::string::npos);
    CHECK(message_of(R"({"tax": {"kind": "tariff"}})").find("kind") != std::string::npos);
    CHECK(message_of(R"({"ring": 1.0})").find("ring") != std::string::npos);
    CHECK(message_of(R"({"firms": [{"position": 0.1}]})").find("cost") != std::string::npos);
    CHECK(message_of(R"({"buyers": [2.5]})").find("position") != std::string::npos);
    CHECK(message_of(R"({"grids": {"q_step": -5}})").find("step") != std::string::npos);
    CHECK(message_of("{not json").find("JSON") != std::string::npos);
    CHECK(message_of(R"([1, 2])").find("object") != std::string::npos);
}

TEST_CASE("config round-trips through serialization") {
    RunConfig config = default_run_config();
    config.market.tax = TaxScheme{TaxKind::cardinal, 0.25, 2.0};
    config.market.unit_costs = {99.0, 100.0};
    config.market.demand_intercept = 125.0;
    config.grid.p_step = 0.5;
    config.grid.q_max = 120.0;

    const RunConfig restored = parse_config(serialize_config(config));
    CHECK(restored.market.tax.kind == config.market.tax.kind);
    CHECK(restored.market.tax.lambda == config.market.tax.lambda);
    CHECK(restored.market.tax.gamma == config.market.tax.gamma);
    CHECK(restored.market.unit_costs == config.market.unit_costs);
    CHECK(restored.market.demand_intercept == config.market.demand_intercept);
    CHECK(restored.market.geography.firm_positions == config.market.geography.firm_positions);
    CHECK(restored.market.geography.buyer_positions == config.market.geography.buyer_positions);
    CHECK(restored.grid.p_step == config.grid.p_step);
    CHECK(restored.grid.q_max == config.grid.q_max);
}

namespace {

ScenarioResult fabricated_row() {
    ScenarioResult row;
    row.scenario.label = "none_100_100";
    row.scenario.tax = TaxScheme{TaxKind::none, 0.1, 1.0};
    row.scenario.costs = {100.0, 100.0};
    row.solved = true;
    row.equilibrium.quantities = {80.0, 80.0};
    row.equilibrium.prices = {106.6, 106.6};
    row.equilibrium.sold = {80.0, 80.0};
    row.equilibrium.revenues = {8528.0, 8528.0};
    row.equilibrium.profits = {528.0, 528.0};
    row.equilibrium.total_revenue = 17056.0;
    row.equilibrium.price_stage = StageProfile{};
    row.rel_profit_diff = {0.0, ""};
    row.revenue_ratio = {1.0, ""};
    row.total_revenue = 17056.0;
    row.normalized_total = 1.0;
    return row;
}

}  // namespace

TEST_CASE("suite CSV shape and fixed-point formatting") {
    SuiteReport report;
    report.baseline_label = "none_100_100";
    report.rows.push_back(fabricated_row());

    ScenarioResult failed;
    failed.scenario.label = "cardinal_99_100";
    failed.scenario.tax = TaxScheme{TaxKind::cardinal, 0.1, 1.0};
    failed.scenario.costs = {99.0, 100.0};
    failed.solved = false;
    failed.error = "boom";
    failed.flags = {"solver_error"};
    report.rows.push_back(failed);

    const std::string csv = suite_report_csv(report);
    const std::string expected_header =
        "label,tax_kind,c1,c2,q1,q2,p1,p2,profit1,profit2,rel_profit_diff,"
        "revenue_total,revenue_normalized,revenue_ratio,equilibrium_kind,flags";
    REQUIRE(csv.rfind(expected_header, 0) == 0);

    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < csv.size()) {
        const std::size_t end = csv.find('\n', start);
        lines.push_back(csv.substr(start, end - start));
        start = end + 1;
    }
    REQUIRE(lines.size() == 3);
    CHECK(lines[1] ==
          "none_100_100,none,100.000000,100.000000,80.000000,80.000000,106.600000,106.600000,"
          "528.000000,528.000000,0.000000,17056.000000,1.000000,1.000000,pure,");
    CHECK(lines[2] == "cardinal_99_100,cardinal,99.000000,100.000000,,,,,,,,,,,,solver_error");

    // every line has the same number of columns
    for (const std::string& line : lines)
        CHECK(std::count(line.begin(), line.end(), ',') == 15);
}

TEST_CASE("run report JSON carries the equilibrium fields") {
    const ScenarioResult row = fabricated_row();
    const std::string text = run_report_json(row.equilibrium);
    const nlohmann::json j = nlohmann::json::parse(text);
    CHECK(j["quantities"][0] == 80.0);
    CHECK(j["prices"][1] == 106.6);
    CHECK(j["profits"][0] == 528.0);
    CHECK(j["total_revenue"] == 17056.0);
    CHECK(j["equilibrium_kind"] == "pure");
    CHECK(j["quantity_stage"]["kind"] == "pure");
    CHECK(j["diagnostics"].contains("mixed_subgames"));
}

TEST_CASE("suite JSON mirrors the CSV fields") {
    SuiteReport report;
    report.baseline_label = "none_100_100";
    report.rows.push_back(fabricated_row());
    const nlohmann::json j = suite_report_to_json(report);
    CHECK(j["baseline"] == "none_100_100");
    REQUIRE(j["rows"].size() == 1);
    CHECK(j["rows"][0]["label"] == "none_100_100");
    CHECK(j["rows"][0]["q1"] == 80.0);
    CHECK(j["rows"][0]["revenue_normalized"] == 1.0);
    CHECK(j["rows"][0]["equilibrium_kind"] == "pure");
}
