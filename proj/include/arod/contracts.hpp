#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "arod/errors.hpp"
#include "arod/money.hpp"
#include "arod/pricing.hpp"

namespace arod::contracts {

// Cash-settled future on the index: fixed notional per index point, settled
// once against the final verified index level. Entry is the index level at
// trade time; there is no daily mark-to-market.
struct FuturesContract {
    std::string institution_id;
    double entry_roi = 0.0;
    Money notional_per_point = Money::from_cents(100'000);  // $1,000 per point
    std::int64_t quantity = 0;                              // positive = long
    std::string settlement_date;
};

// European option on the index, cash-settled at expiry.
struct OptionContract {
    std::string institution_id;
    pricing::OptionKind kind = pricing::OptionKind::call;
    double strike = 0.0;
    std::int64_t units = 0;
    Money unit_multiplier = Money::from_cents(100);  // $1 per point per unit
    Money premium_paid;
    std::string expiry;
};

// Contract-design guardrails. cap_ratio clamps the effective settlement
// index at cap_ratio x the contract's own reference level (issuer-pays
// direction); floor_ratio is the symmetric downside collar. The liability
// ceiling is an aggregate annual limit applied pro-rata across settlements.
struct RiskControls {
    std::optional<double> cap_ratio;    // > 1 when present
    std::optional<double> floor_ratio;  // in (0,1) when present
    std::optional<Money> liability_ceiling;
};

struct SettlementResult {
    Money gross;    // uncontrolled settlement, positive = cash to the long side
    Money capped;   // settlement after cap/floor
    bool cap_applied = false;
    bool floor_applied = false;
    bool ceiling_applied = false;
    double effective_final_roi = 0.0;
};

inline void validate(const FuturesContract& c) {
    if (!std::isfinite(c.entry_roi) || c.entry_roi <= 0.0)
        fail(Errc::validation_error, "entry_roi must be > 0");
    if (!c.notional_per_point.is_positive())
        fail(Errc::validation_error, "notional_per_point must be > 0");
    if (c.quantity == 0) fail(Errc::validation_error, "quantity must be nonzero");
}

inline void validate(const OptionContract& c) {
    if (!std::isfinite(c.strike) || c.strike <= 0.0)
        fail(Errc::validation_error, "strike must be > 0");
    if (c.units < 1) fail(Errc::validation_error, "units must be >= 1");
    if (!c.unit_multiplier.is_positive())
        fail(Errc::validation_error, "unit_multiplier must be > 0");
    if (c.premium_paid < Money{}) fail(Errc::validation_error, "premium_paid must be >= 0");
}

inline void validate(const RiskControls& controls) {
    if (controls.cap_ratio && (!std::isfinite(*controls.cap_ratio) || *controls.cap_ratio <= 1.0))
        fail(Errc::validation_error, "cap_ratio must be > 1");
    if (controls.floor_ratio &&
        (!std::isfinite(*controls.floor_ratio) || *controls.floor_ratio <= 0.0 ||
         *controls.floor_ratio >= 1.0))
        fail(Errc::validation_error, "floor_ratio must be in (0,1)");
    if (controls.liability_ceiling && !controls.liability_ceiling->is_positive())
        fail(Errc::validation_error, "liability_ceiling must be > 0");
}

// gross = (final - entry) x quantity x notional_per_point, rounded to a cent
// at the final figure. With a cap, the effective settlement index is
// min(final, cap_ratio x entry); with a floor, max(final, floor_ratio x entry).
inline SettlementResult settle_futures(const FuturesContract& c, double final_roi,
                                       const RiskControls& controls = {}) {
    validate(c);
    validate(controls);
    if (!std::isfinite(final_roi) || final_roi <= 0.0)
        fail(Errc::non_positive_roi, "final ROI must be > 0");

    SettlementResult result;
    result.gross =
        c.notional_per_point.times((final_roi - c.entry_roi) * static_cast<double>(c.quantity));

    double effective = final_roi;
    if (controls.cap_ratio) {
        const double cap_level = *controls.cap_ratio * c.entry_roi;
        if (effective > cap_level) {
            effective = cap_level;
            result.cap_applied = true;
        }
    }
    if (controls.floor_ratio) {
        const double floor_level = *controls.floor_ratio * c.entry_roi;
        if (effective < floor_level) {
            effective = floor_level;
            result.floor_applied = true;
        }
    }
    result.effective_final_roi = effective;
    result.capped = (result.cap_applied || result.floor_applied)
                        ? c.notional_per_point.times((effective - c.entry_roi) *
                                                     static_cast<double>(c.quantity))
                        : result.gross;
    return result;
}

struct OptionSettlement {
    Money gross_payoff;  // >= 0 always
    Money net_pnl;       // gross payoff minus premium paid
};

inline OptionSettlement settle_option(const OptionContract& c, double final_roi) {
    validate(c);
    if (!std::isfinite(final_roi) || final_roi <= 0.0)
        fail(Errc::non_positive_roi, "final ROI must be > 0");
    const double payoff_points = pricing::intrinsic_value(final_roi, c.strike, c.kind);
    OptionSettlement s;
    s.gross_payoff = c.unit_multiplier.times(payoff_points * static_cast<double>(c.units));
    s.net_pnl = s.gross_payoff - c.premium_paid;
    return s;
}

struct LiabilityTotals {
    Money total;    // sum of issuer-pays settlements before the ceiling
    Money clipped;  // after the ceiling
    bool ceiling_applied = false;
    // Per input settlement: issuer-pays amounts scaled pro-rata so their sum
    // equals `clipped` to the cent; issuer-receives amounts pass through.
    std::vector<Money> scaled;
};

// Aggregate annual liability across one issuer's settlements. Positive
// (issuer-pays) amounts are clipped pro-rata to the ceiling; the cent
// remainder goes to the largest fractional shares so the clipped total is
// conserved exactly.
inline LiabilityTotals aggregate_issuer_liability(std::span<const SettlementResult> settlements,
                                                  const RiskControls& controls = {}) {
    validate(controls);
    LiabilityTotals out;
    out.scaled.reserve(settlements.size());
    for (const auto& s : settlements) {
        out.scaled.push_back(s.capped);
        if (s.capped.is_positive()) out.total += s.capped;
    }
    out.clipped = out.total;
    if (!controls.liability_ceiling || out.total <= *controls.liability_ceiling) return out;

    out.ceiling_applied = true;
    out.clipped = *controls.liability_ceiling;

    const auto total = static_cast<__int128>(out.total.cents());
    const auto clipped = static_cast<__int128>(out.clipped.cents());
    std::vector<std::size_t> positive_idx;
    std::vector<__int128> remainders(settlements.size(), 0);
    __int128 allocated = 0;
    for (std::size_t i = 0; i < settlements.size(); ++i) {
        if (!out.scaled[i].is_positive()) continue;
        const auto share = static_cast<__int128>(out.scaled[i].cents()) * clipped;
        remainders[i] = share % total;
        out.scaled[i] = Money::from_cents(static_cast<std::int64_t>(share / total));
        allocated += share / total;
        positive_idx.push_back(i);
    }
    auto deficit = static_cast<std::int64_t>(clipped - allocated);
    std::sort(positive_idx.begin(), positive_idx.end(), [&](std::size_t a, std::size_t b) {
        if (remainders[a] != remainders[b]) return remainders[a] > remainders[b];
        return a < b;
    });
    for (std::size_t k = 0; deficit > 0; ++k, --deficit) {
        out.scaled[positive_idx[k]] += Money::from_cents(1);
    }
    return out;
}

}  // namespace arod::contracts
