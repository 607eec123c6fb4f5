#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

#include "arod/errors.hpp"

namespace arod::pricing {

enum class OptionKind { call, put };

// Inputs to the European option model on the index: current level S0 and
// strike K in index points, maturity T in years, continuously compounded
// annual rate r, annualized volatility sigma. The index pays no carry, so
// there is no dividend-yield term.
struct PricingInputs {
    double spot = 0.0;
    double strike = 0.0;
    double maturity = 0.0;
    double rate = 0.0;
    double vol = 0.0;
};

struct PricingOutputs {
    double d1 = 0.0;
    double d2 = 0.0;
    double nd1 = 0.0;  // N(d1)
    double nd2 = 0.0;  // N(d2)
    double price = 0.0;
};

// How N(.) enters the price. four_decimals emulates reading a printed
// normal table (values rounded to 4 places), which reproduces hand-worked
// textbook arithmetic digit for digit; full precision is the default.
enum class CdfMode { exact, table4 };

inline constexpr double kInvSqrt2 = 0.70710678118654752440;

// Phi(x) = erfc(-x / sqrt 2) / 2. std::erfc is good to a few ulps, far
// inside the 1e-10 absolute accuracy this module promises.
inline double std_normal_cdf(double x) {
    if (!std::isfinite(x)) fail(Errc::non_finite, "normal cdf argument is not finite");
    return 0.5 * std::erfc(-x * kInvSqrt2);
}

inline void validate(const PricingInputs& in) {
    if (!std::isfinite(in.spot) || in.spot <= 0.0)
        fail(Errc::invalid_input, "spot must be > 0");
    if (!std::isfinite(in.strike) || in.strike <= 0.0)
        fail(Errc::invalid_input, "strike must be > 0");
    if (!std::isfinite(in.rate)) fail(Errc::invalid_input, "rate must be finite");
    if (!std::isfinite(in.vol) || in.vol <= 0.0)
        fail(Errc::invalid_vol, "vol must be > 0 (expiry valuation goes through intrinsic_value)");
    if (!std::isfinite(in.maturity) || in.maturity <= 0.0)
        fail(Errc::invalid_maturity, "maturity must be > 0");
}

// d1 = [ln(S0/K) + (r + sigma^2/2) T] / (sigma sqrt T),  d2 = d1 - sigma sqrt T.
inline std::pair<double, double> compute_d1_d2(const PricingInputs& in) {
    validate(in);
    const double vol_sqrt_t = in.vol * std::sqrt(in.maturity);
    const double d1 =
        (std::log(in.spot / in.strike) + (in.rate + 0.5 * in.vol * in.vol) * in.maturity) /
        vol_sqrt_t;
    return {d1, d1 - vol_sqrt_t};
}

namespace detail {
inline double round4(double x) { return std::round(x * 10000.0) / 10000.0; }
}  // namespace detail

inline PricingOutputs option_price(const PricingInputs& in, OptionKind kind,
                                   CdfMode mode = CdfMode::exact) {
    const auto [d1, d2] = compute_d1_d2(in);
    PricingOutputs out;
    out.d1 = d1;
    out.d2 = d2;
    out.nd1 = std_normal_cdf(d1);
    out.nd2 = std_normal_cdf(d2);
    if (mode == CdfMode::table4) {
        out.nd1 = detail::round4(out.nd1);
        out.nd2 = detail::round4(out.nd2);
    }
    const double discounted_strike = in.strike * std::exp(-in.rate * in.maturity);
    if (kind == OptionKind::call) {
        out.price = in.spot * out.nd1 - discounted_strike * out.nd2;
    } else {
        out.price = discounted_strike * (1.0 - out.nd2) - in.spot * (1.0 - out.nd1);
    }
    out.price = std::max(out.price, 0.0);
    return out;
}

// C = S0 N(d1) - K e^{-rT} N(d2)
inline PricingOutputs call_price(const PricingInputs& in) {
    return option_price(in, OptionKind::call);
}

// P = K e^{-rT} N(-d2) - S0 N(-d1)
inline PricingOutputs put_price(const PricingInputs& in) {
    return option_price(in, OptionKind::put);
}

// Payoff at expiry: max(S-K, 0) for calls, max(K-S, 0) for puts.
inline double intrinsic_value(double spot, double strike, OptionKind kind) {
    if (!std::isfinite(spot) || spot <= 0.0) fail(Errc::invalid_input, "spot must be > 0");
    if (!std::isfinite(strike) || strike <= 0.0) fail(Errc::invalid_input, "strike must be > 0");
    return kind == OptionKind::call ? std::max(spot - strike, 0.0) : std::max(strike - spot, 0.0);
}

}  // namespace arod::pricing
