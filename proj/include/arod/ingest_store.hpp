#pragma once

#include <charconv>
#include <cstdio>
#include <fcntl.h>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <sys/file.h>
#include <unistd.h>
#include <utility>
#include <vector>

#include "json.hpp"

#include "arod/contracts.hpp"
#include "arod/errors.hpp"
#include "arod/money.hpp"
#include "arod/roi_index.hpp"
#include "arod/scenario.hpp"
#include "arod/vol_estimator.hpp"

namespace arod::store {

inline constexpr int kFormatVersion = 1;

struct AuditBlock {
    std::string source;
    std::string submission_date;
    std::string auditor_id;
};

struct ComponentInput {
    double raw = 0.0;
    double baseline = 0.0;
};

// One institution-year of raw submissions, pre-normalization.
struct RawMetrics {
    std::string institution_id;
    int period = 0;
    ComponentInput publications;
    ComponentInput citations;
    ComponentInput grants;
    ComponentInput innovation;
    ComponentInput societal;

    [[nodiscard]] roi::ComponentScores normalized() const {
        return {roi::normalize_component(publications.raw, publications.baseline),
                roi::normalize_component(citations.raw, citations.baseline),
                roi::normalize_component(grants.raw, grants.baseline),
                roi::normalize_component(innovation.raw, innovation.baseline),
                roi::normalize_component(societal.raw, societal.baseline)};
    }
};

struct MetricsFile {
    int format_version = kFormatVersion;
    AuditBlock audit;
    std::vector<RawMetrics> records;
};

namespace detail {

using json = nlohmann::json;

inline json parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::parse_error, "cannot read " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        fail(Errc::parse_error, path.string() + ": " + e.what());
    }
    return doc;
}

inline void require_version(const json& doc, const std::string& where) {
    if (!doc.is_object() || !doc.contains("format_version") ||
        !doc["format_version"].is_number_integer() ||
        doc["format_version"].get<int>() != kFormatVersion)
        fail(Errc::validation_error, where + ": unrecognized format_version");
}

inline const json& field(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key))
        fail(Errc::validation_error, where + ": missing field '" + key + "'");
    return obj[key];
}

inline double number_field(const json& obj, const std::string& key, const std::string& where) {
    const json& v = field(obj, key, where);
    if (!v.is_number()) fail(Errc::validation_error, where + "." + key + ": expected a number");
    return v.get<double>();
}

inline std::string string_field(const json& obj, const std::string& key,
                                const std::string& where) {
    const json& v = field(obj, key, where);
    if (!v.is_string()) fail(Errc::validation_error, where + "." + key + ": expected a string");
    return v.get<std::string>();
}

inline std::int64_t int_field(const json& obj, const std::string& key, const std::string& where) {
    const json& v = field(obj, key, where);
    if (!v.is_number_integer())
        fail(Errc::validation_error, where + "." + key + ": expected an integer");
    return v.get<std::int64_t>();
}

inline Money money_field(const json& obj, const std::string& key, const std::string& where) {
    const json& v = field(obj, key, where);
    if (!v.is_string())
        fail(Errc::validation_error,
             where + "." + key + ": cash amounts are decimal strings, e.g. \"1000.00\"");
    return Money::parse(v.get<std::string>());
}

inline ComponentInput component_field(const json& record, const std::string& key,
                                      const std::string& where) {
    const json& v = field(record, key, where);
    ComponentInput c;
    c.raw = number_field(v, "raw", where + "." + key);
    c.baseline = number_field(v, "baseline", where + "." + key);
    if (!std::isfinite(c.raw) || c.raw < 0.0)
        fail(Errc::validation_error, where + "." + key + ".raw: must be finite and >= 0");
    if (!std::isfinite(c.baseline) || c.baseline <= 0.0)
        fail(Errc::validation_error, where + "." + key + ".baseline: must be > 0");
    return c;
}

// Shortest decimal string that parses back to the identical double.
inline std::string roi_to_string(double roi) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), roi);
    return std::string(buf, res.ptr);
}

inline double roi_from_string(const std::string& text, const std::string& where) {
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        fail(Errc::parse_error, where + ": bad ROI value '" + text + "'");
    return value;
}

// Institution ids are opaque; escape anything unsafe for a filename.
inline std::string sanitize_id(const std::string& id) {
    std::string out;
    for (unsigned char ch : id) {
        if ((ch >= 'A' && ch <= 'Z') || (ch >= 'a' && ch <= 'z') || (ch >= '0' && ch <= '9') ||
            ch == '-' || ch == '_' || ch == '.') {
            out += static_cast<char>(ch);
        } else {
            char buf[4];
            std::snprintf(buf, sizeof(buf), "%%%02X", ch);
            out += buf;
        }
    }
    return out.empty() ? std::string("%") : out;
}

// Advisory exclusive lock held for the duration of a write.
class StoreLock {
public:
    explicit StoreLock(const std::filesystem::path& lock_path) {
        fd_ = ::open(lock_path.c_str(), O_CREAT | O_RDWR, 0644);
        if (fd_ < 0) fail(Errc::storage_failure, "cannot open lock file " + lock_path.string());
        if (::flock(fd_, LOCK_EX) != 0) {
            ::close(fd_);
            fail(Errc::storage_failure, "cannot lock store");
        }
    }
    ~StoreLock() {
        if (fd_ >= 0) {
            ::flock(fd_, LOCK_UN);
            ::close(fd_);
        }
    }
    StoreLock(const StoreLock&) = delete;
    StoreLock& operator=(const StoreLock&) = delete;

private:
    int fd_ = -1;
};

}  // namespace detail

// Loads and fully validates a metrics submission; any invalid record aborts
// the whole load with a record/field diagnostic.
inline MetricsFile load_metrics(const std::filesystem::path& path) {
    const auto doc = detail::parse_file(path);
    detail::require_version(doc, path.filename().string());

    MetricsFile out;
    const auto& audit = detail::field(doc, "audit", "metrics file");
    out.audit.source = detail::string_field(audit, "source", "audit");
    out.audit.submission_date = detail::string_field(audit, "submission_date", "audit");
    out.audit.auditor_id = detail::string_field(audit, "auditor_id", "audit");

    const auto& records = detail::field(doc, "records", "metrics file");
    if (!records.is_array()) fail(Errc::validation_error, "records: expected an array");

    std::set<std::pair<std::string, int>> seen;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const std::string where = "records[" + std::to_string(i) + "]";
        const auto& rec = records[i];
        RawMetrics m;
        m.institution_id = detail::string_field(rec, "institution_id", where);
        if (m.institution_id.empty())
            fail(Errc::validation_error, where + ".institution_id: must be nonempty");
        m.period = static_cast<int>(detail::int_field(rec, "period", where));
        m.publications = detail::component_field(rec, "publications", where);
        m.citations = detail::component_field(rec, "citations", where);
        m.grants = detail::component_field(rec, "grants", where);
        m.innovation = detail::component_field(rec, "innovation", where);
        m.societal = detail::component_field(rec, "societal", where);
        if (!seen.emplace(m.institution_id, m.period).second)
            fail(Errc::duplicate_record, where + ": duplicate (institution, period) = (" +
                                             m.institution_id + ", " + std::to_string(m.period) +
                                             ")");
        out.records.push_back(std::move(m));
    }
    return out;
}

// Weights config: {"format_version":1, "weights":[w1..w5]} — raw weights,
// normalized (and thereby validated) at load.
inline roi::WeightVector load_weights(const std::filesystem::path& path) {
    const auto doc = detail::parse_file(path);
    detail::require_version(doc, path.filename().string());
    const auto& w = detail::field(doc, "weights", "weights file");
    if (!w.is_array() || w.size() != roi::kComponentCount)
        fail(Errc::validation_error, "weights: expected an array of 5 numbers");
    std::array<double, roi::kComponentCount> raw{};
    for (std::size_t i = 0; i < roi::kComponentCount; ++i) {
        if (!w[i].is_number()) fail(Errc::validation_error, "weights: expected an array of 5 numbers");
        raw[i] = w[i].get<double>();
    }
    return roi::normalize_weights(raw);
}

// Append-only per-institution ROI history under <root>/history/<id>.jsonl,
// one {"institution_id","period","roi"} object per line with the ROI as a
// decimal string, so appended values reload bit-identically. Writers hold an
// advisory lock on <root>/.lock; readers never block each other.
class Store {
public:
    explicit Store(std::filesystem::path root) : root_(std::move(root)) {
        std::error_code ec;
        std::filesystem::create_directories(root_ / "history", ec);
        if (ec) fail(Errc::storage_failure, "cannot create store at " + root_.string());
    }

    [[nodiscard]] const std::filesystem::path& root() const noexcept { return root_; }

    void append_roi(const std::string& institution_id, const std::string& period, double roi) {
        if (institution_id.empty())
            fail(Errc::validation_error, "institution_id must be nonempty");
        if (!std::isfinite(roi) || roi <= 0.0)
            fail(Errc::validation_error, "ROI must be > 0");

        detail::StoreLock lock(root_ / ".lock");
        const auto path = history_path(institution_id);
        if (std::filesystem::exists(path)) {
            for (const auto& obs : read_history(path).observations) {
                if (obs.period == period)
                    fail(Errc::duplicate_period, "ROI for (" + institution_id + ", " + period +
                                                     ") already recorded");
            }
        }
        nlohmann::ordered_json line{{"institution_id", institution_id},
                                    {"period", period},
                                    {"roi", detail::roi_to_string(roi)}};
        std::ofstream out(path, std::ios::app);
        if (!out) fail(Errc::storage_failure, "cannot open " + path.string());
        out << line.dump() << '\n';
        out.flush();
        if (!out) fail(Errc::storage_failure, "write failed for " + path.string());
    }

    [[nodiscard]] vol::RoiSeries load_series(const std::string& institution_id) const {
        const auto path = history_path(institution_id);
        if (!std::filesystem::exists(path))
            fail(Errc::unknown_institution, "no ROI history for '" + institution_id + "'");
        return read_history(path);
    }

private:
    [[nodiscard]] std::filesystem::path history_path(const std::string& institution_id) const {
        return root_ / "history" / (detail::sanitize_id(institution_id) + ".jsonl");
    }

    [[nodiscard]] static vol::RoiSeries read_history(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) fail(Errc::storage_failure, "cannot read " + path.string());
        vol::RoiSeries series;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const std::string where = path.filename().string() + ":" + std::to_string(line_no);
            nlohmann::json obj;
            try {
                obj = nlohmann::json::parse(line);
            } catch (const nlohmann::json::parse_error& e) {
                fail(Errc::parse_error, where + ": " + e.what());
            }
            const std::string id = detail::string_field(obj, "institution_id", where);
            if (series.institution_id.empty()) series.institution_id = id;
            if (id != series.institution_id)
                fail(Errc::validation_error, where + ": mixed institution ids in history");
            vol::RoiObservation obs;
            obs.period = detail::string_field(obj, "period", where);
            obs.roi = detail::roi_from_string(detail::string_field(obj, "roi", where), where);
            if (!std::isfinite(obs.roi) || obs.roi <= 0.0)
                fail(Errc::validation_error, where + ": ROI must be > 0");
            series.observations.push_back(std::move(obs));
        }
        std::sort(series.observations.begin(), series.observations.end(),
                  [](const auto& a, const auto& b) { return a.period < b.period; });
        for (std::size_t i = 1; i < series.observations.size(); ++i) {
            if (series.observations[i - 1].period == series.observations[i].period)
                fail(Errc::duplicate_period, path.filename().string() + ": duplicate period '" +
                                                 series.observations[i].period + "'");
        }
        return series;
    }

    std::filesystem::path root_;
};

// A standalone JSON Lines series file in the history format (CLI --series-file).
inline vol::RoiSeries load_series_file(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path))
        fail(Errc::parse_error, "cannot read " + path.string());
    std::ifstream in(path);
    if (!in) fail(Errc::parse_error, "cannot read " + path.string());
    vol::RoiSeries series;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string where = path.filename().string() + ":" + std::to_string(line_no);
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            fail(Errc::parse_error, where + ": " + e.what());
        }
        vol::RoiObservation obs;
        if (series.institution_id.empty())
            series.institution_id = detail::string_field(obj, "institution_id", where);
        obs.period = detail::string_field(obj, "period", where);
        obs.roi = detail::roi_from_string(detail::string_field(obj, "roi", where), where);
        series.observations.push_back(std::move(obs));
    }
    std::sort(series.observations.begin(), series.observations.end(),
              [](const auto& a, const auto& b) { return a.period < b.period; });
    vol::validate(series);
    return series;
}

// ---------------------------------------------------------------------------
// Contract documents
// ---------------------------------------------------------------------------

inline contracts::FuturesContract load_futures_contract(const std::filesystem::path& path) {
    const auto doc = detail::parse_file(path);
    detail::require_version(doc, path.filename().string());
    if (detail::string_field(doc, "type", "contract") != "futures")
        fail(Errc::validation_error, "contract: expected type \"futures\"");
    contracts::FuturesContract c;
    c.institution_id = detail::string_field(doc, "institution_id", "contract");
    c.entry_roi = detail::number_field(doc, "entry_roi", "contract");
    c.notional_per_point = detail::money_field(doc, "notional_per_point", "contract");
    c.quantity = detail::int_field(doc, "quantity", "contract");
    c.settlement_date = detail::string_field(doc, "settlement_date", "contract");
    contracts::validate(c);
    return c;
}

inline contracts::OptionContract load_option_contract(const std::filesystem::path& path) {
    const auto doc = detail::parse_file(path);
    detail::require_version(doc, path.filename().string());
    if (detail::string_field(doc, "type", "contract") != "option")
        fail(Errc::validation_error, "contract: expected type \"option\"");
    contracts::OptionContract c;
    c.institution_id = detail::string_field(doc, "institution_id", "contract");
    const std::string kind = detail::string_field(doc, "kind", "contract");
    if (kind == "call") {
        c.kind = pricing::OptionKind::call;
    } else if (kind == "put") {
        c.kind = pricing::OptionKind::put;
    } else {
        fail(Errc::validation_error, "contract.kind: expected \"call\" or \"put\"");
    }
    c.strike = detail::number_field(doc, "strike", "contract");
    c.units = detail::int_field(doc, "units", "contract");
    c.unit_multiplier = detail::money_field(doc, "unit_multiplier", "contract");
    c.premium_paid = detail::money_field(doc, "premium_paid", "contract");
    c.expiry = detail::string_field(doc, "expiry", "contract");
    if (doc.contains("style") && detail::string_field(doc, "style", "contract") != "european")
        fail(Errc::validation_error, "contract.style: only \"european\" is supported");
    contracts::validate(c);
    return c;
}

// ---------------------------------------------------------------------------
// Scenario configs
// ---------------------------------------------------------------------------

namespace detail {

inline scenario::FuturesTerms futures_terms(const json& obj, const std::string& where) {
    scenario::FuturesTerms terms;
    terms.entry_roi = number_field(obj, "entry_roi", where);
    terms.quantity = int_field(obj, "quantity", where);
    terms.notional_per_point = money_field(obj, "notional_per_point", where);
    return terms;
}

inline contracts::RiskControls risk_controls(const json& obj, const std::string& where) {
    contracts::RiskControls controls;
    if (obj.contains("cap_ratio")) controls.cap_ratio = number_field(obj, "cap_ratio", where);
    if (obj.contains("floor_ratio")) controls.floor_ratio = number_field(obj, "floor_ratio", where);
    if (obj.contains("liability_ceiling"))
        controls.liability_ceiling = money_field(obj, "liability_ceiling", where);
    contracts::validate(controls);
    return controls;
}

}  // namespace detail

inline scenario::ScenarioConfig load_scenario_config(const std::filesystem::path& path) {
    const auto doc = detail::parse_file(path);
    detail::require_version(doc, path.filename().string());

    scenario::ScenarioConfig cfg;
    const std::string kind = detail::string_field(doc, "kind", "scenario");
    if (kind == "issuance") {
        cfg.kind = scenario::Kind::issuance;
    } else if (kind == "momentum") {
        cfg.kind = scenario::Kind::momentum;
    } else if (kind == "hedge_put") {
        cfg.kind = scenario::Kind::hedge_put;
    } else if (kind == "reserve_projection") {
        cfg.kind = scenario::Kind::reserve_projection;
    } else {
        fail(Errc::invalid_config, "scenario.kind: unknown kind '" + kind + "'");
    }
    cfg.institution_id = detail::string_field(doc, "institution_id", "scenario");
    if (doc.contains("rate")) cfg.rate = detail::number_field(doc, "rate", "scenario");

    if (doc.contains("roi_path")) {
        const auto& path_json = doc["roi_path"];
        if (!path_json.is_array()) fail(Errc::invalid_config, "scenario.roi_path: expected an array");
        for (std::size_t i = 0; i < path_json.size(); ++i) {
            const std::string where = "roi_path[" + std::to_string(i) + "]";
            scenario::PathPoint p;
            p.date = detail::string_field(path_json[i], "date", where);
            p.roi = detail::number_field(path_json[i], "roi", where);
            cfg.roi_path.push_back(std::move(p));
        }
    }
    if (doc.contains("futures")) cfg.futures = detail::futures_terms(doc["futures"], "scenario.futures");
    if (doc.contains("issue_price_factor"))
        cfg.issue_price_factor = detail::number_field(doc, "issue_price_factor", "scenario");
    if (doc.contains("controls")) cfg.controls = detail::risk_controls(doc["controls"], "scenario.controls");
    if (doc.contains("hedge")) {
        const auto& h = doc["hedge"];
        scenario::HedgeTerms terms;
        terms.strike = detail::number_field(h, "strike", "scenario.hedge");
        terms.units = detail::int_field(h, "units", "scenario.hedge");
        terms.unit_multiplier = detail::money_field(h, "unit_multiplier", "scenario.hedge");
        terms.maturity = detail::number_field(h, "maturity", "scenario.hedge");
        terms.vol = detail::number_field(h, "vol", "scenario.hedge");
        terms.shortfall_per_point = detail::money_field(h, "shortfall_per_point", "scenario.hedge");
        if (h.contains("min_coverage_ratio"))
            terms.min_coverage_ratio = detail::number_field(h, "min_coverage_ratio", "scenario.hedge");
        cfg.hedge = std::move(terms);
    }
    if (doc.contains("reserve")) {
        const auto& r = doc["reserve"];
        scenario::ReserveTerms terms;
        terms.proceeds = detail::money_field(r, "proceeds", "scenario.reserve");
        terms.fraction = detail::number_field(r, "fraction", "scenario.reserve");
        terms.horizon_years = static_cast<int>(detail::int_field(r, "horizon_years", "scenario.reserve"));
        if (r.contains("compounding")) {
            const std::string c = detail::string_field(r, "compounding", "scenario.reserve");
            if (c == "annual") {
                terms.compounding = scenario::Compounding::annual;
            } else if (c == "continuous") {
                terms.compounding = scenario::Compounding::continuous;
            } else {
                fail(Errc::invalid_config, "scenario.reserve.compounding: 'annual' or 'continuous'");
            }
        }
        if (r.contains("worst_case")) {
            const auto& w = r["worst_case"];
            scenario::WorstCase wc;
            wc.max_roi = detail::number_field(w, "max_roi", "scenario.reserve.worst_case");
            wc.futures = detail::futures_terms(detail::field(w, "futures", "scenario.reserve.worst_case"),
                                               "scenario.reserve.worst_case.futures");
            if (w.contains("controls"))
                wc.controls = detail::risk_controls(w["controls"], "scenario.reserve.worst_case.controls");
            terms.worst_case = std::move(wc);
        }
        cfg.reserve = std::move(terms);
    }
    return cfg;
}

}  // namespace arod::store
