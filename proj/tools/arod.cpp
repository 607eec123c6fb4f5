// arod — command-line surface for the research-output derivatives toolkit.
//
// Exit codes: 0 success, 1 domain/validation error, 2 usage error.
// All output is deterministic: identical inputs give byte-identical stdout.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "arod/arod.hpp"

namespace {

using arod::Money;

std::string signed_grouped(Money m) {
    return (m.cents() >= 0 ? "+" : "") + m.str_grouped();
}

void cmd_roi_compute(const std::string& metrics_path, const std::string& weights_path,
                     const std::string& store_dir) {
    auto metrics = arod::store::load_metrics(metrics_path);
    const auto weights = arod::store::load_weights(weights_path);
    std::sort(metrics.records.begin(), metrics.records.end(), [](const auto& a, const auto& b) {
        if (a.institution_id != b.institution_id) return a.institution_id < b.institution_id;
        return a.period < b.period;
    });
    std::optional<arod::store::Store> store;
    if (!store_dir.empty()) store.emplace(store_dir);
    for (const auto& record : metrics.records) {
        const auto scores = record.normalized();
        const double value = arod::roi::compute_roi(scores, weights);
        std::printf("%s %d P=%.4f C=%.4f G=%.4f I=%.4f S=%.4f ROI=%.4f\n",
                    record.institution_id.c_str(), record.period, scores.publications,
                    scores.citations, scores.grants, scores.innovation, scores.societal, value);
        if (store) store->append_roi(record.institution_id, std::to_string(record.period), value);
    }
}

void cmd_price(const std::string& kind_str, const arod::pricing::PricingInputs& inputs,
               bool paper_tables, bool as_json) {
    using arod::pricing::CdfMode;
    using arod::pricing::OptionKind;
    const OptionKind kind = kind_str == "call" ? OptionKind::call : OptionKind::put;
    const auto out = arod::pricing::option_price(
        inputs, kind, paper_tables ? CdfMode::table4 : CdfMode::exact);
    if (as_json) {
        nlohmann::ordered_json j{{"kind", kind_str},
                                 {"spot", inputs.spot},
                                 {"strike", inputs.strike},
                                 {"maturity", inputs.maturity},
                                 {"rate", inputs.rate},
                                 {"vol", inputs.vol},
                                 {"paper_tables", paper_tables},
                                 {"d1", out.d1},
                                 {"d2", out.d2},
                                 {"nd1", out.nd1},
                                 {"nd2", out.nd2},
                                 {"price", out.price}};
        std::cout << j.dump() << '\n';
        return;
    }
    std::printf("d1     %.4f\n", out.d1);
    std::printf("d2     %.4f\n", out.d2);
    std::printf("N(d1)  %.4f\n", out.nd1);
    std::printf("N(d2)  %.4f\n", out.nd2);
    std::printf("%-5s  %.2f\n", kind_str.c_str(), out.price);
}

void cmd_settle_futures(const std::string& contract_path, double final_roi,
                        const arod::contracts::RiskControls& controls) {
    const auto contract = arod::store::load_futures_contract(contract_path);
    const auto result = arod::contracts::settle_futures(contract, final_roi, controls);
    Money settled = result.capped;
    bool ceiling_applied = false;
    if (controls.liability_ceiling) {
        const auto totals = arod::contracts::aggregate_issuer_liability({&result, 1}, controls);
        if (totals.ceiling_applied) {
            settled = totals.scaled.front();
            ceiling_applied = true;
        }
    }
    std::printf("gross            %s\n", signed_grouped(result.gross).c_str());
    std::printf("capped           %s\n", signed_grouped(settled).c_str());
    std::printf("cap_applied      %s\n", result.cap_applied ? "yes" : "no");
    std::printf("floor_applied    %s\n", result.floor_applied ? "yes" : "no");
    std::printf("ceiling_applied  %s\n", ceiling_applied ? "yes" : "no");
    std::printf("effective_roi    %.4f\n", result.effective_final_roi);
}

void cmd_settle_option(const std::string& contract_path, double final_roi) {
    const auto contract = arod::store::load_option_contract(contract_path);
    const auto result = arod::contracts::settle_option(contract, final_roi);
    std::printf("gross  %s\n", result.gross_payoff.str_grouped().c_str());
    std::printf("net    %s\n", signed_grouped(result.net_pnl).c_str());
}

void cmd_vol_estimate(const std::string& series_file, const std::string& institution,
                      const std::string& store_dir, double periods_per_year) {
    arod::vol::RoiSeries series;
    if (!series_file.empty()) {
        series = arod::store::load_series_file(series_file);
    } else {
        series = arod::store::Store(store_dir).load_series(institution);
    }
    std::printf("%.6f\n", arod::vol::annualized_vol(series, periods_per_year));
}

void cmd_scenario(const std::string& config_path, bool as_json, const std::string& csv_path) {
    const auto cfg = arod::store::load_scenario_config(config_path);
    const auto report = arod::scenario::run(cfg);
    if (!csv_path.empty()) {
        std::ofstream out(csv_path, std::ios::binary);
        out << arod::scenario::to_csv(report);
        out.flush();
        if (!out) arod::fail(arod::Errc::storage_failure, "cannot write " + csv_path);
    }
    if (as_json) {
        std::cout << arod::scenario::to_json(report).dump(2) << '\n';
    } else {
        arod::scenario::render_table(report, std::cout);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"research-output index derivatives toolkit"};
    app.require_subcommand(1);

    // roi compute
    auto* roi_cmd = app.add_subcommand("roi", "composite index construction");
    roi_cmd->require_subcommand(1);
    auto* roi_compute = roi_cmd->add_subcommand("compute", "compute the index per institution");
    std::string metrics_path, weights_path, roi_store_dir;
    roi_compute->add_option("metrics", metrics_path, "metrics JSON file")->required();
    roi_compute->add_option("weights", weights_path, "weights JSON file")->required();
    roi_compute->add_option("--store", roi_store_dir, "append each ROI to this store directory");
    roi_compute->callback([&] { cmd_roi_compute(metrics_path, weights_path, roi_store_dir); });

    // price
    auto* price_cmd = app.add_subcommand("price", "price a European option on the index");
    std::string price_kind;
    arod::pricing::PricingInputs price_in;
    bool paper_tables = false;
    bool price_json = false;
    price_cmd->add_option("kind", price_kind, "call or put")
        ->required()
        ->check(CLI::IsMember({"call", "put"}));
    price_cmd->add_option("--spot", price_in.spot, "current index level")->required();
    price_cmd->add_option("--strike", price_in.strike, "strike index level")->required();
    price_cmd->add_option("--maturity", price_in.maturity, "time to maturity in years")->required();
    price_cmd->add_option("--rate", price_in.rate, "annual risk-free rate, continuous compounding")
        ->required();
    price_cmd->add_option("--vol", price_in.vol, "annualized volatility")->required();
    price_cmd->add_flag("--paper-tables", paper_tables,
                        "use 4-decimal normal-table values, matching hand-worked arithmetic");
    price_cmd->add_flag("--json", price_json, "machine-readable output");
    price_cmd->callback([&] { cmd_price(price_kind, price_in, paper_tables, price_json); });

    // settle futures|option
    auto* settle_cmd = app.add_subcommand("settle", "cash-settle a contract document");
    settle_cmd->require_subcommand(1);
    std::string settle_contract;
    double settle_final = 0.0;
    std::optional<double> cap_ratio_opt, floor_ratio_opt;
    std::string ceiling_str;

    auto* settle_futures = settle_cmd->add_subcommand("futures", "settle a futures contract");
    settle_futures->add_option("contract", settle_contract, "contract JSON document")->required();
    settle_futures->add_option("--final-roi", settle_final, "final verified index level")
        ->required();
    settle_futures->add_option("--cap-ratio", cap_ratio_opt, "cap settlement index at ratio x entry");
    settle_futures->add_option("--floor-ratio", floor_ratio_opt,
                               "floor settlement index at ratio x entry");
    settle_futures->add_option("--ceiling", ceiling_str,
                               "aggregate liability ceiling, decimal amount");
    settle_futures->callback([&] {
        arod::contracts::RiskControls controls;
        controls.cap_ratio = cap_ratio_opt;
        controls.floor_ratio = floor_ratio_opt;
        if (!ceiling_str.empty()) controls.liability_ceiling = Money::parse(ceiling_str);
        cmd_settle_futures(settle_contract, settle_final, controls);
    });

    auto* settle_option = settle_cmd->add_subcommand("option", "settle an option at expiry");
    settle_option->add_option("contract", settle_contract, "contract JSON document")->required();
    settle_option->add_option("--final-roi", settle_final, "final verified index level")
        ->required();
    settle_option->callback([&] { cmd_settle_option(settle_contract, settle_final); });

    // vol estimate
    auto* vol_cmd = app.add_subcommand("vol", "historical volatility estimation");
    vol_cmd->require_subcommand(1);
    auto* vol_estimate = vol_cmd->add_subcommand("estimate", "annualized log-return volatility");
    std::string vol_series_file, vol_institution, vol_store_dir;
    double periods_per_year = 1.0;
    auto* series_opt =
        vol_estimate->add_option("--series-file", vol_series_file, "JSON Lines series file");
    auto* inst_opt =
        vol_estimate->add_option("--institution", vol_institution, "institution id in the store");
    auto* store_opt = vol_estimate->add_option("--store", vol_store_dir, "store directory");
    inst_opt->needs(store_opt);
    store_opt->needs(inst_opt);
    series_opt->excludes(inst_opt);
    vol_estimate->add_option("--periods-per-year", periods_per_year,
                             "observations per year (default 1)");
    vol_estimate->callback([&] {
        if (vol_series_file.empty() && vol_institution.empty())
            throw CLI::RequiredError("--series-file or --institution/--store");
        cmd_vol_estimate(vol_series_file, vol_institution, vol_store_dir, periods_per_year);
    });

    // scenario
    auto* scenario_cmd = app.add_subcommand("scenario", "run a scenario config end to end");
    std::string scenario_config, scenario_csv;
    bool scenario_json = false;
    scenario_cmd->add_option("config", scenario_config, "scenario JSON config")->required();
    scenario_cmd->add_flag("--json", scenario_json, "emit the report as JSON");
    scenario_cmd->add_option("--emit-csv", scenario_csv, "write the cash-flow ledger CSV here");
    scenario_cmd->callback([&] { cmd_scenario(scenario_config, scenario_json, scenario_csv); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const arod::Error& e) {
        std::cerr << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "Error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
