#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "arod/errors.hpp"

namespace arod::vol {

// One index observation. Periods are calendar years ("2024") or ISO dates
// ("2024-06-30"); both order correctly as strings.
struct RoiObservation {
    std::string period;
    double roi = 0.0;
};

struct RoiSeries {
    std::string institution_id;
    std::vector<RoiObservation> observations;
};

inline void validate(const RoiSeries& series) {
    for (std::size_t i = 0; i < series.observations.size(); ++i) {
        const auto& obs = series.observations[i];
        if (!std::isfinite(obs.roi) || obs.roi <= 0.0)
            fail(Errc::non_positive,
                 "ROI at period '" + obs.period + "' must be > 0 (log returns require it)");
        if (i > 0 && !(series.observations[i - 1].period < obs.period))
            fail(Errc::validation_error,
                 "observations not strictly increasing in time at period '" + obs.period + "'");
    }
}

// r_i = ln(ROI_{i+1} / ROI_i) for consecutive observations.
inline std::vector<double> log_returns(const RoiSeries& series) {
    validate(series);
    if (series.observations.size() < 2)
        fail(Errc::too_short, "need at least 2 observations for log returns");
    std::vector<double> returns;
    returns.reserve(series.observations.size() - 1);
    for (std::size_t i = 0; i + 1 < series.observations.size(); ++i) {
        returns.push_back(std::log(series.observations[i + 1].roi / series.observations[i].roi));
    }
    return returns;
}

// Close-to-close estimator: sample standard deviation (n-1 denominator) of the
// log returns, scaled by sqrt(periods_per_year). Annual observations use
// periods_per_year = 1. Zero if and only if all returns are equal.
inline double annualized_vol(const RoiSeries& series, double periods_per_year = 1.0) {
    if (!std::isfinite(periods_per_year) || periods_per_year <= 0.0)
        fail(Errc::invalid_input, "periods_per_year must be > 0");
    if (series.observations.size() < 3)
        fail(Errc::too_short, "need at least 3 observations to estimate volatility");
    const std::vector<double> returns = log_returns(series);

    const auto [lo, hi] = std::minmax_element(returns.begin(), returns.end());
    if (*lo == *hi) return 0.0;  // identical returns: dispersion is exactly zero

    double mean = 0.0;
    for (double r : returns) mean += r;
    mean /= static_cast<double>(returns.size());

    double ss = 0.0;
    for (double r : returns) ss += (r - mean) * (r - mean);
    const double sample_var = ss / static_cast<double>(returns.size() - 1);
    return std::sqrt(sample_var) * std::sqrt(periods_per_year);
}

}  // namespace arod::vol
