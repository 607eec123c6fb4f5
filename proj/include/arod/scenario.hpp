#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "arod/contracts.hpp"
#include "arod/errors.hpp"
#include "arod/money.hpp"
#include "arod/pricing.hpp"

namespace arod::scenario {

enum class Kind { issuance, momentum, hedge_put, reserve_projection };

inline const char* kind_name(Kind k) noexcept {
    switch (k) {
        case Kind::issuance:           return "issuance";
        case Kind::momentum:           return "momentum";
        case Kind::hedge_put:          return "hedge_put";
        case Kind::reserve_projection: return "reserve_projection";
    }
    return "?";
}

struct PathPoint {
    std::string date;
    double roi = 0.0;
};

struct FuturesTerms {
    double entry_roi = 0.0;
    std::int64_t quantity = 0;
    Money notional_per_point = Money::from_cents(100'000);
};

struct HedgeTerms {
    double strike = 0.0;
    std::int64_t units = 0;
    Money unit_multiplier = Money::from_cents(100);
    double maturity = 0.0;  // years; premium is priced off the first path point
    double vol = 0.0;
    Money shortfall_per_point;  // budget impact per index point below strike
    std::optional<double> min_coverage_ratio;
};

enum class Compounding { annual, continuous };

struct WorstCase {
    double max_roi = 0.0;
    FuturesTerms futures;
    contracts::RiskControls controls;
};

struct ReserveTerms {
    Money proceeds;
    double fraction = 0.0;  // share of proceeds earmarked for the reserve
    int horizon_years = 0;
    Compounding compounding = Compounding::annual;
    std::optional<WorstCase> worst_case;
};

struct ScenarioConfig {
    Kind kind = Kind::issuance;
    std::string institution_id;
    double rate = 0.0;
    std::vector<PathPoint> roi_path;
    std::optional<FuturesTerms> futures;
    std::optional<double> issue_price_factor;
    contracts::RiskControls controls;
    std::optional<HedgeTerms> hedge;
    std::optional<ReserveTerms> reserve;
};

// Issue price per contract = entry_roi x notional_per_point x factor. The
// default factor is calibrated so the bundled momentum fixture (1,000
// contracts, $1,000/point, entry index 95) raises exactly $10,000,000.
inline constexpr double kDefaultIssuePriceFactor = 2.0 / 19.0;

struct CashFlow {
    std::string date;
    std::string party;
    std::string label;
    Money amount;
};

struct ReserveRow {
    int year = 0;
    Money balance;
    std::optional<Money> worst_case_liability;
    bool covered = true;
};

struct ScenarioReport {
    Kind kind = Kind::issuance;
    std::string institution_id;
    std::vector<CashFlow> cash_flows;
    std::map<std::string, Money> party_pnl;  // per-party sum of cash flows
    bool cap_applied = false;
    bool floor_applied = false;
    bool ceiling_applied = false;
    std::optional<double> effective_final_roi;
    // issuance
    std::optional<Money> proceeds;
    std::optional<Money> settlement;  // positive = issuer pays investors
    std::optional<Money> institution_net;
    // hedge
    std::optional<Money> premium;
    std::optional<Money> payout;
    std::optional<Money> shortfall;
    std::optional<Money> net_shortfall;
    std::optional<double> coverage_ratio;
    // reserve
    std::vector<ReserveRow> reserve_rows;
    std::vector<std::string> summary;
};

namespace detail {

inline void validate_path(const std::vector<PathPoint>& path, std::size_t min_points) {
    if (path.size() < min_points)
        fail(Errc::invalid_config, "roi_path needs at least " + std::to_string(min_points) +
                                       " points for this scenario");
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (!std::isfinite(path[i].roi) || path[i].roi <= 0.0)
            fail(Errc::invalid_config, "roi_path values must be > 0");
        if (i > 0 && !(path[i - 1].date < path[i].date))
            fail(Errc::invalid_config, "roi_path dates must be strictly increasing");
    }
}

inline void add_transfer(ScenarioReport& report, const std::string& date, const std::string& from,
                         const std::string& to, const std::string& label, Money amount) {
    report.cash_flows.push_back({date, from, label, -amount});
    report.cash_flows.push_back({date, to, label, amount});
    report.party_pnl[from] -= amount;
    report.party_pnl[to] += amount;
}

inline std::string signed_grouped(Money m) {
    return (m.cents() >= 0 ? "+" : "") + m.str_grouped();
}

inline std::string format_roi(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

}  // namespace detail

// Exchange-traded issuance: proceeds at the first path date, cash settlement
// of the issued futures against the final path level. Also serves the
// research-momentum variant, which is the same trade with a rising path.
inline ScenarioReport run_issuance(const ScenarioConfig& cfg) {
    if (cfg.kind != Kind::issuance && cfg.kind != Kind::momentum)
        fail(Errc::invalid_config, "run_issuance requires kind=issuance or kind=momentum");
    if (!cfg.futures) fail(Errc::invalid_config, "issuance scenario requires futures terms");
    detail::validate_path(cfg.roi_path, 2);
    const double factor = cfg.issue_price_factor.value_or(kDefaultIssuePriceFactor);
    if (!std::isfinite(factor) || factor <= 0.0)
        fail(Errc::invalid_config, "issue_price_factor must be > 0");

    const FuturesTerms& terms = *cfg.futures;
    contracts::FuturesContract contract{cfg.institution_id, terms.entry_roi,
                                        terms.notional_per_point, terms.quantity,
                                        cfg.roi_path.back().date};
    const double final_roi = cfg.roi_path.back().roi;

    ScenarioReport report;
    report.kind = cfg.kind;
    report.institution_id = cfg.institution_id;

    const Money proceeds = terms.notional_per_point.times(
        terms.entry_roi * factor * static_cast<double>(terms.quantity));
    report.proceeds = proceeds;
    detail::add_transfer(report, cfg.roi_path.front().date, "investors", "institution",
                         "issuance proceeds", proceeds);

    const auto settled = contracts::settle_futures(contract, final_roi, cfg.controls);
    Money obligation = settled.capped;
    report.cap_applied = settled.cap_applied;
    report.floor_applied = settled.floor_applied;
    report.effective_final_roi = settled.effective_final_roi;
    if (cfg.controls.liability_ceiling) {
        const auto totals = contracts::aggregate_issuer_liability({&settled, 1}, cfg.controls);
        if (totals.ceiling_applied) {
            obligation = totals.scaled.front();
            report.ceiling_applied = true;
        }
    }
    report.settlement = obligation;
    detail::add_transfer(report, cfg.roi_path.back().date, "institution", "investors",
                         "futures settlement", obligation);

    report.institution_net = proceeds - obligation;
    report.summary.push_back("issued " + std::to_string(terms.quantity) + " contracts at index " +
                             detail::format_roi(terms.entry_roi) + ", raising " +
                             proceeds.str_grouped());
    report.summary.push_back("settled at effective index " +
                             detail::format_roi(settled.effective_final_roi) + " (final " +
                             detail::format_roi(final_roi) + "): issuer pays " +
                             obligation.str_grouped());
    report.summary.push_back("institution net " + detail::signed_grouped(*report.institution_net));
    return report;
}

// Budget hedge: buy puts on the institution's own index, price the premium
// up front, settle at expiry, and compare the payout with the budget
// shortfall implied by the index decline.
inline ScenarioReport run_hedge_put(const ScenarioConfig& cfg) {
    if (cfg.kind != Kind::hedge_put) fail(Errc::invalid_config, "run_hedge_put requires kind=hedge_put");
    if (!cfg.hedge) fail(Errc::invalid_config, "hedge_put scenario requires hedge terms");
    detail::validate_path(cfg.roi_path, 2);
    const HedgeTerms& terms = *cfg.hedge;
    if (terms.shortfall_per_point < Money{})
        fail(Errc::invalid_config, "shortfall_per_point must be >= 0");

    const double spot = cfg.roi_path.front().roi;
    const double final_roi = cfg.roi_path.back().roi;

    ScenarioReport report;
    report.kind = cfg.kind;
    report.institution_id = cfg.institution_id;

    const auto put = pricing::put_price({spot, terms.strike, terms.maturity, cfg.rate, terms.vol});
    const Money premium =
        terms.unit_multiplier.times(put.price * static_cast<double>(terms.units));
    report.premium = premium;
    detail::add_transfer(report, cfg.roi_path.front().date, "institution", "counterparty",
                         "put premium", premium);

    contracts::OptionContract option{cfg.institution_id, pricing::OptionKind::put, terms.strike,
                                     terms.units,         terms.unit_multiplier,   premium,
                                     cfg.roi_path.back().date};
    const auto settled = contracts::settle_option(option, final_roi);
    report.payout = settled.gross_payoff;
    detail::add_transfer(report, cfg.roi_path.back().date, "counterparty", "institution",
                         "put payout", settled.gross_payoff);

    const double shortfall_points = std::max(terms.strike - final_roi, 0.0);
    const Money shortfall = terms.shortfall_per_point.times(shortfall_points);
    report.shortfall = shortfall;
    report.net_shortfall = shortfall - settled.gross_payoff;
    if (shortfall.is_positive()) {
        report.coverage_ratio = static_cast<double>(settled.gross_payoff.cents()) /
                                static_cast<double>(shortfall.cents());
    }

    report.summary.push_back("hedged with " + std::to_string(terms.units) +
                             " put units struck at " + detail::format_roi(terms.strike) +
                             ", premium " + premium.str_grouped());
    report.summary.push_back("index finished at " + detail::format_roi(final_roi) + ": payout " +
                             settled.gross_payoff.str_grouped());
    if (report.coverage_ratio) {
        report.summary.push_back("shortfall " + shortfall.str_grouped() + ", covered " +
                                 detail::format_roi(*report.coverage_ratio * 100.0) +
                                 "% by the hedge");
        if (terms.min_coverage_ratio) {
            report.summary.push_back(*report.coverage_ratio >= *terms.min_coverage_ratio
                                         ? "coverage target met"
                                         : "coverage target missed");
        }
    } else {
        report.summary.push_back("no budget shortfall; hedge cost " + premium.str_grouped());
    }
    return report;
}

// Reserve-fund projection: a fraction of issuance proceeds compounds at the
// low-risk rate; each year's balance is compared with the worst-case
// settlement liability implied by the supplied maximum index assumption.
inline ScenarioReport project_reserve(const ScenarioConfig& cfg) {
    if (cfg.kind != Kind::reserve_projection)
        fail(Errc::invalid_config, "project_reserve requires kind=reserve_projection");
    if (!cfg.reserve) fail(Errc::invalid_config, "reserve scenario requires reserve terms");
    const ReserveTerms& terms = *cfg.reserve;
    if (!terms.proceeds.is_positive()) fail(Errc::invalid_config, "proceeds must be > 0");
    if (!std::isfinite(terms.fraction) || terms.fraction < 0.0 || terms.fraction > 1.0)
        fail(Errc::invalid_config, "reserve fraction must be in [0,1]");
    if (terms.horizon_years < 1) fail(Errc::invalid_config, "horizon must be >= 1 year");
    if (!std::isfinite(cfg.rate) || cfg.rate < 0.0)
        fail(Errc::invalid_config, "reserve rate must be >= 0");

    ScenarioReport report;
    report.kind = cfg.kind;
    report.institution_id = cfg.institution_id;

    std::optional<Money> worst;
    if (terms.worst_case) {
        contracts::FuturesContract contract{cfg.institution_id, terms.worst_case->futures.entry_roi,
                                            terms.worst_case->futures.notional_per_point,
                                            terms.worst_case->futures.quantity, ""};
        const auto settled = contracts::settle_futures(contract, terms.worst_case->max_roi,
                                                       terms.worst_case->controls);
        worst = std::max(settled.capped, Money{});
        report.cap_applied = settled.cap_applied;
        report.effective_final_roi = settled.effective_final_roi;
    }

    const double growth =
        terms.compounding == Compounding::annual ? 1.0 + cfg.rate : std::exp(cfg.rate);
    const Money initial = terms.proceeds.times(terms.fraction);
    Money balance = initial;
    report.party_pnl.emplace("institution", Money{});  // present even with no interest
    report.party_pnl.emplace("market", Money{});
    bool all_covered = true;
    for (int year = 1; year <= terms.horizon_years; ++year) {
        const Money interest = balance.times(growth - 1.0);
        if (!interest.is_zero()) {
            detail::add_transfer(report, "year " + std::to_string(year), "market", "institution",
                                 "reserve interest", interest);
        }
        balance += interest;
        ReserveRow row{year, balance, worst, true};
        if (worst) row.covered = balance >= *worst;
        all_covered = all_covered && row.covered;
        report.reserve_rows.push_back(row);
    }

    report.summary.push_back("reserve funded with " + detail::format_roi(terms.fraction * 100.0) +
                             "% of proceeds " + terms.proceeds.str_grouped() +
                             ": initial balance " + initial.str_grouped());
    report.summary.push_back("balance after " + std::to_string(terms.horizon_years) + " years: " +
                             balance.str_grouped());
    if (worst) {
        report.summary.push_back("worst-case settlement liability " + worst->str_grouped() +
                                 (all_covered ? " is covered every year"
                                              : " is NOT covered in at least one year"));
    }
    if (terms.fraction == 0.0) {
        report.summary.push_back("reserve fraction is 0: settlement obligations are unfunded");
    }
    return report;
}

inline ScenarioReport run(const ScenarioConfig& cfg) {
    switch (cfg.kind) {
        case Kind::issuance:
        case Kind::momentum:
            return run_issuance(cfg);
        case Kind::hedge_put:
            return run_hedge_put(cfg);
        case Kind::reserve_projection:
            return project_reserve(cfg);
    }
    fail(Errc::invalid_config, "unknown scenario kind");
}

// ---------------------------------------------------------------------------
// Report rendering. All three forms are deterministic: identical reports
// render byte-identically (no timestamps, stable key order).
// ---------------------------------------------------------------------------

inline void render_table(const ScenarioReport& report, std::ostream& os) {
    os << "scenario     " << kind_name(report.kind) << '\n';
    os << "institution  " << report.institution_id << '\n';
    os << '\n';
    os << "cash flows\n";
    os << "  date          party         label               amount\n";
    for (const auto& flow : report.cash_flows) {
        char line[160];
        std::snprintf(line, sizeof(line), "  %-12s  %-12s  %-18s  %s", flow.date.c_str(),
                      flow.party.c_str(), flow.label.c_str(),
                      detail::signed_grouped(flow.amount).c_str());
        os << line << '\n';
    }
    if (report.cash_flows.empty()) os << "  (none)\n";
    os << '\n';
    os << "net positions\n";
    for (const auto& [party, pnl] : report.party_pnl) {
        char line[120];
        std::snprintf(line, sizeof(line), "  %-12s  %s", party.c_str(),
                      detail::signed_grouped(pnl).c_str());
        os << line << '\n';
    }
    os << '\n';
    os << "controls\n";
    os << "  cap_applied      " << (report.cap_applied ? "yes" : "no") << '\n';
    os << "  floor_applied    " << (report.floor_applied ? "yes" : "no") << '\n';
    os << "  ceiling_applied  " << (report.ceiling_applied ? "yes" : "no") << '\n';
    if (report.effective_final_roi)
        os << "  effective_roi    " << detail::format_roi(*report.effective_final_roi) << '\n';
    if (!report.reserve_rows.empty()) {
        os << '\n';
        os << "reserve projection\n";
        os << "  year  balance             worst_case          covered\n";
        for (const auto& row : report.reserve_rows) {
            char line[160];
            std::snprintf(line, sizeof(line), "  %-4d  %-18s  %-18s  %s", row.year,
                          row.balance.str_grouped().c_str(),
                          row.worst_case_liability ? row.worst_case_liability->str_grouped().c_str()
                                                   : "-",
                          row.worst_case_liability ? (row.covered ? "yes" : "no") : "-");
            os << line << '\n';
        }
    }
    os << '\n';
    os << "summary\n";
    for (const auto& line : report.summary) os << "  " << line << '\n';
}

inline nlohmann::ordered_json to_json(const ScenarioReport& report) {
    nlohmann::ordered_json j;
    j["format_version"] = 1;
    j["kind"] = kind_name(report.kind);
    j["institution_id"] = report.institution_id;
    j["cash_flows"] = nlohmann::ordered_json::array();
    for (const auto& flow : report.cash_flows) {
        j["cash_flows"].push_back({{"date", flow.date},
                                   {"party", flow.party},
                                   {"label", flow.label},
                                   {"amount", flow.amount.str()}});
    }
    j["party_pnl"] = nlohmann::ordered_json::object();
    for (const auto& [party, pnl] : report.party_pnl) j["party_pnl"][party] = pnl.str();
    j["controls"] = {{"cap_applied", report.cap_applied},
                     {"floor_applied", report.floor_applied},
                     {"ceiling_applied", report.ceiling_applied}};
    if (report.effective_final_roi) j["controls"]["effective_final_roi"] = *report.effective_final_roi;
    const auto put_money = [&](const char* key, const std::optional<Money>& m) {
        if (m) j[key] = m->str();
    };
    put_money("proceeds", report.proceeds);
    put_money("settlement", report.settlement);
    put_money("institution_net", report.institution_net);
    put_money("premium", report.premium);
    put_money("payout", report.payout);
    put_money("shortfall", report.shortfall);
    put_money("net_shortfall", report.net_shortfall);
    if (report.coverage_ratio) j["coverage_ratio"] = *report.coverage_ratio;
    if (!report.reserve_rows.empty()) {
        j["reserve"] = nlohmann::ordered_json::array();
        for (const auto& row : report.reserve_rows) {
            nlohmann::ordered_json r{{"year", row.year}, {"balance", row.balance.str()}};
            if (row.worst_case_liability) {
                r["worst_case_liability"] = row.worst_case_liability->str();
                r["covered"] = row.covered;
            }
            j["reserve"].push_back(r);
        }
    }
    j["summary"] = report.summary;
    return j;
}

// Cash-flow ledger for plotting: one row per flow, amounts as plain signed
// decimals (no grouping) so spreadsheets parse them.
inline std::string to_csv(const ScenarioReport& report) {
    std::string out = "date,party,label,amount\n";
    for (const auto& flow : report.cash_flows) {
        out += flow.date + ',' + flow.party + ',' + flow.label + ',' + flow.amount.str() + '\n';
    }
    return out;
}

}  // namespace arod::scenario
