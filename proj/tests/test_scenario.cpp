#include <catch2/catch.hpp>

#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "arod/ingest_store.hpp"
#include "arod/scenario.hpp"

using namespace arod::scenario;
using arod::Errc;
using arod::Error;
using arod::Money;

namespace {

const std::filesystem::path kFixtures = AROD_FIXTURE_DIR;

ScenarioConfig load(const char* name) {
    return arod::store::load_scenario_config(kFixtures / name);
}

// Per-party flow sums must equal the stated net positions, and transfers must
// net to zero across parties: money is neither created nor destroyed.
void check_conservation(const ScenarioReport& report) {
    std::map<std::string, Money> sums;
    Money total;
    for (const auto& flow : report.cash_flows) {
        sums[flow.party] += flow.amount;
        total += flow.amount;
    }
    CHECK(total.cents() == 0);
    for (const auto& [party, pnl] : report.party_pnl) {
        CHECK(sums[party] == pnl);  // exact cents
    }
    CHECK(sums.size() == report.party_pnl.size());
}

Errc thrown_code(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an arod::Error");
    return Errc::validation_error;
}

}  // namespace

TEST_CASE("momentum fixture: issue at 95, settle at 120") {
    const auto report = run(load("scenario_momentum.json"));
    REQUIRE(report.proceeds.has_value());
    REQUIRE(report.settlement.has_value());
    CHECK(report.proceeds->cents() == 1'000'000'000);     // $10,000,000.00 raised
    CHECK(report.settlement->cents() == 2'500'000'000);   // (120-95) x 1000 x $1,000
    CHECK(report.institution_net->cents() == -1'500'000'000);
    CHECK(report.party_pnl.at("investors").cents() == 1'500'000'000);
    check_conservation(report);
}

TEST_CASE("flat issuance fixture: settlement zero, net equals proceeds") {
    const auto report = run(load("scenario_issuance.json"));
    CHECK(report.settlement->cents() == 0);
    CHECK(report.proceeds->cents() == 1'000'000'000);  // factor 0.1 of 1000 x $1,000 x 100
    CHECK(*report.institution_net == *report.proceeds);
    check_conservation(report);
}

TEST_CASE("issuance composes with the settlement cap") {
    ScenarioConfig cfg;
    cfg.kind = Kind::issuance;
    cfg.institution_id = "UNIV-CAP";
    cfg.roi_path = {{"2025-01-01", 100.0}, {"2026-01-01", 130.0}};
    cfg.futures = FuturesTerms{100.0, 10, Money::parse("1000.00")};
    cfg.issue_price_factor = 0.1;
    cfg.controls.cap_ratio = 1.2;

    const auto report = run_issuance(cfg);
    CHECK(report.cap_applied);
    CHECK(*report.effective_final_roi == 120.0);
    CHECK(report.settlement->cents() == 20'000'000);  // at effective 120, not 130
    check_conservation(report);
}

TEST_CASE("issuance honors an aggregate liability ceiling") {
    ScenarioConfig cfg;
    cfg.kind = Kind::issuance;
    cfg.institution_id = "UNIV-CEIL";
    cfg.roi_path = {{"2025-01-01", 100.0}, {"2026-01-01", 140.0}};
    cfg.futures = FuturesTerms{100.0, 10, Money::parse("1000.00")};
    cfg.issue_price_factor = 0.1;
    cfg.controls.liability_ceiling = Money::parse("250000.00");

    const auto report = run_issuance(cfg);
    CHECK(report.ceiling_applied);
    CHECK(report.settlement->cents() == 25'000'000);
    check_conservation(report);
}

TEST_CASE("hedge fixture: eight-point payout covers the shortfall") {
    const auto report = run(load("scenario_hedge_put.json"));
    REQUIRE(report.payout.has_value());
    CHECK(report.payout->cents() == 40'000'000);  // 8 points x 50,000 units x $1
    CHECK(report.shortfall->cents() == 40'000'000);
    REQUIRE(report.coverage_ratio.has_value());
    CHECK(*report.coverage_ratio == Approx(1.0).margin(1e-12));
    bool target_met = false;
    for (const auto& line : report.summary) target_met |= line == "coverage target met";
    CHECK(target_met);
    check_conservation(report);

    // premium equals the option settlement identity: payout - net cost
    CHECK(report.premium->is_positive());
    CHECK(report.party_pnl.at("institution") == *report.payout - *report.premium);
}

TEST_CASE("hedge payout equals a direct option settlement on the same terms") {
    const auto cfg = load("scenario_hedge_put.json");
    const auto report = run_hedge_put(cfg);
    arod::contracts::OptionContract option{cfg.institution_id,
                                           arod::pricing::OptionKind::put,
                                           cfg.hedge->strike,
                                           cfg.hedge->units,
                                           cfg.hedge->unit_multiplier,
                                           *report.premium,
                                           cfg.roi_path.back().date};
    const auto direct = arod::contracts::settle_option(option, cfg.roi_path.back().roi);
    CHECK(direct.gross_payoff == *report.payout);
}

TEST_CASE("hedge: ten-point slide covered at 80 percent") {
    ScenarioConfig cfg;
    cfg.kind = Kind::hedge_put;
    cfg.institution_id = "STATE-U";
    cfg.rate = 0.03;
    cfg.roi_path = {{"2025-01-01", 100.0}, {"2026-01-01", 90.0}};
    cfg.hedge = HedgeTerms{100.0,          40'000, Money::parse("1.00"), 1.0, 0.18,
                           Money::parse("50000.00"), 0.8};

    const auto report = run_hedge_put(cfg);
    CHECK(report.payout->cents() == 40'000'000);     // 10 x 40,000 x $1
    CHECK(report.shortfall->cents() == 50'000'000);  // 10 points x $50,000
    CHECK(*report.coverage_ratio == Approx(0.8).margin(1e-12));
    CHECK(report.net_shortfall->cents() == 10'000'000);
    check_conservation(report);
}

TEST_CASE("hedge expires worthless when the index holds") {
    ScenarioConfig cfg;
    cfg.kind = Kind::hedge_put;
    cfg.institution_id = "STATE-U";
    cfg.rate = 0.03;
    cfg.roi_path = {{"2025-01-01", 100.0}, {"2026-01-01", 104.0}};
    cfg.hedge = HedgeTerms{100.0, 1000, Money::parse("1.00"), 1.0, 0.18, Money::parse("50000.00"),
                           std::nullopt};

    const auto report = run_hedge_put(cfg);
    CHECK(report.payout->cents() == 0);
    CHECK(report.shortfall->cents() == 0);
    CHECK_FALSE(report.coverage_ratio.has_value());
    CHECK(report.party_pnl.at("institution") == -*report.premium);
    check_conservation(report);
}

TEST_CASE("reserve fixture compounds to the dollar") {
    const auto report = run(load("scenario_reserve.json"));
    REQUIRE(report.reserve_rows.size() == 3);
    CHECK(report.reserve_rows[0].balance.cents() == 1'030'000'000);
    CHECK(report.reserve_rows[1].balance.cents() == 1'060'900'000);
    CHECK(report.reserve_rows[2].balance.cents() == 1'092'727'000);  // $10,927,270.00

    // capped worst case: effective index min(120, 1.2 x 95) = 114
    REQUIRE(report.reserve_rows[0].worst_case_liability.has_value());
    CHECK(report.reserve_rows[0].worst_case_liability->cents() == 1'900'000'000);
    CHECK_FALSE(report.reserve_rows[2].covered);
    check_conservation(report);
}

TEST_CASE("reserve at zero rate stays flat") {
    const auto report = run(load("scenario_reserve_flat.json"));
    REQUIRE(report.reserve_rows.size() == 4);
    for (const auto& row : report.reserve_rows) {
        CHECK(row.balance.cents() == 500'000'000);  // half of $10M, every year
    }
    CHECK(report.cash_flows.empty());
    check_conservation(report);
}

TEST_CASE("unfunded reserve is flagged") {
    ScenarioConfig cfg;
    cfg.kind = Kind::reserve_projection;
    cfg.institution_id = "UNIV-ZERO";
    cfg.rate = 0.03;
    cfg.reserve = ReserveTerms{Money::parse("5000000.00"), 0.0, 2, Compounding::annual,
                               std::nullopt};
    const auto report = project_reserve(cfg);
    CHECK(report.reserve_rows[1].balance.cents() == 0);
    bool flagged = false;
    for (const auto& line : report.summary)
        flagged |= line.find("unfunded") != std::string::npos;
    CHECK(flagged);
}

TEST_CASE("reserve balance is monotone in rate, fraction and proceeds") {
    const auto run_reserve = [](const char* proceeds, double fraction, double rate) {
        ScenarioConfig cfg;
        cfg.kind = Kind::reserve_projection;
        cfg.institution_id = "U";
        cfg.rate = rate;
        cfg.reserve =
            ReserveTerms{Money::parse(proceeds), fraction, 5, Compounding::annual, std::nullopt};
        return project_reserve(cfg).reserve_rows.back().balance;
    };
    const Money base = run_reserve("1000000.00", 0.5, 0.03);
    CHECK(run_reserve("1000000.00", 0.5, 0.05) >= base);
    CHECK(run_reserve("1000000.00", 0.8, 0.03) >= base);
    CHECK(run_reserve("2000000.00", 0.5, 0.03) >= base);
}

TEST_CASE("continuous compounding grows at exp(r) per year") {
    ScenarioConfig cfg;
    cfg.kind = Kind::reserve_projection;
    cfg.institution_id = "U";
    cfg.rate = 0.03;
    cfg.reserve = ReserveTerms{Money::parse("1000000.00"), 1.0, 1, Compounding::continuous,
                               std::nullopt};
    const auto report = project_reserve(cfg);
    CHECK(report.reserve_rows[0].balance.cents() ==
          Money::parse("1000000.00").times(std::exp(0.03)).cents());
}

TEST_CASE("reports render deterministically") {
    const auto report = run(load("scenario_momentum.json"));
    std::ostringstream first, second;
    render_table(report, first);
    render_table(report, second);
    CHECK(first.str() == second.str());
    CHECK(first.str().find("10,000,000.00") != std::string::npos);
    CHECK(first.str().find("25,000,000.00") != std::string::npos);

    const auto j1 = to_json(report).dump(2);
    const auto j2 = to_json(run(load("scenario_momentum.json"))).dump(2);
    CHECK(j1 == j2);
    CHECK(j1.find("\"proceeds\": \"10000000.00\"") != std::string::npos);

    const auto csv = to_csv(report);
    CHECK(csv.rfind("date,party,label,amount\n", 0) == 0);
    CHECK(csv.find("issuance proceeds,10000000.00") != std::string::npos);
}

TEST_CASE("invalid scenario configs are rejected") {
    ScenarioConfig cfg;
    cfg.kind = Kind::issuance;
    cfg.institution_id = "U";
    cfg.roi_path = {{"2025-01-01", 100.0}, {"2026-01-01", 100.0}};
    CHECK(thrown_code([&] { run_issuance(cfg); }) == Errc::invalid_config);  // no futures terms

    cfg.futures = FuturesTerms{100.0, 10, Money::parse("1000.00")};
    cfg.roi_path = {{"2026-01-01", 100.0}, {"2025-01-01", 100.0}};
    CHECK(thrown_code([&] { run_issuance(cfg); }) == Errc::invalid_config);  // dates go backward

    cfg.roi_path = {{"2025-01-01", 100.0}};
    CHECK(thrown_code([&] { run_issuance(cfg); }) == Errc::invalid_config);  // single point

    cfg.roi_path = {{"2025-01-01", 100.0}, {"2026-01-01", -3.0}};
    CHECK(thrown_code([&] { run_issuance(cfg); }) == Errc::invalid_config);  // nonpositive level

    ScenarioConfig reserve_cfg;
    reserve_cfg.kind = Kind::reserve_projection;
    reserve_cfg.institution_id = "U";
    reserve_cfg.rate = 0.03;
    reserve_cfg.reserve =
        ReserveTerms{Money::parse("100.00"), 1.5, 3, Compounding::annual, std::nullopt};
    CHECK(thrown_code([&] { project_reserve(reserve_cfg); }) == Errc::invalid_config);

    reserve_cfg.reserve->fraction = 0.5;
    reserve_cfg.reserve->horizon_years = 0;
    CHECK(thrown_code([&] { project_reserve(reserve_cfg); }) == Errc::invalid_config);

    // kind mismatch across operations
    ScenarioConfig wrong = load("scenario_momentum.json");
    CHECK(thrown_code([&] { run_hedge_put(wrong); }) == Errc::invalid_config);
}
