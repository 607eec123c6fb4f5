#include <catch2/catch.hpp>

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "arod/vol_estimator.hpp"

using namespace arod::vol;
using arod::Errc;
using arod::Error;

namespace {

RoiSeries series_of(std::vector<double> values) {
    RoiSeries s;
    s.institution_id = "TEST";
    int year = 2000;
    for (double v : values) s.observations.push_back({std::to_string(year++), v});
    return s;
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

TEST_CASE("log returns of consecutive observations") {
    const auto flat = log_returns(series_of({100, 100, 100}));
    REQUIRE(flat.size() == 2);
    CHECK(flat[0] == 0.0);
    CHECK(flat[1] == 0.0);

    const auto exp_growth =
        log_returns(series_of({100, 100 * std::exp(0.1), 100 * std::exp(0.2)}));
    CHECK(exp_growth[0] == Approx(0.1).margin(1e-12));
    CHECK(exp_growth[1] == Approx(0.1).margin(1e-12));

    const auto updown = log_returns(series_of({100, 110, 99}));
    CHECK(updown[0] == Approx(std::log(1.1)).margin(1e-15));
    CHECK(updown[1] == Approx(std::log(0.9)).margin(1e-15));
    CHECK(updown[0] == Approx(0.09531).margin(5e-6));
    CHECK(updown[1] == Approx(-0.10536).margin(5e-6));
}

TEST_CASE("log returns error paths") {
    CHECK(thrown_code([] { log_returns(series_of({100})); }) == Errc::too_short);
    CHECK(thrown_code([] { log_returns(series_of({100, 0, 90})); }) == Errc::non_positive);
    CHECK(thrown_code([] { log_returns(series_of({100, -3, 90})); }) == Errc::non_positive);

    RoiSeries unsorted = series_of({100, 105});
    std::swap(unsorted.observations[0].period, unsorted.observations[1].period);
    CHECK(thrown_code([&] { log_returns(unsorted); }) == Errc::validation_error);
}

TEST_CASE("annualized vol is exactly zero when all returns are equal") {
    CHECK(annualized_vol(series_of({100, 100, 100})) == 0.0);
    CHECK(annualized_vol(series_of({100, 100, 100, 100}), 12.0) == 0.0);
    // exact multiplicative chain: every ratio is bitwise the same double
    CHECK(annualized_vol(series_of({100.0, 150.0, 225.0, 337.5})) == 0.0);
}

TEST_CASE("annualized vol matches the hand-computed two-return case") {
    // returns {+ln 1.1, -ln 1.1}: sample std with n-1 denominator is ln(1.1) * sqrt 2
    const double expected = std::log(1.1) * std::sqrt(2.0);
    CHECK(annualized_vol(series_of({100, 110, 100}), 1.0) == Approx(expected).margin(1e-9));
    CHECK(expected == Approx(0.13480).margin(5e-5));
}

TEST_CASE("annualized vol error paths") {
    CHECK(thrown_code([] { annualized_vol(series_of({100, 110})); }) == Errc::too_short);
    CHECK(thrown_code([] { annualized_vol(series_of({100, 110, 120}), 0.0); }) ==
          Errc::invalid_input);
    CHECK(thrown_code([] { annualized_vol(series_of({100, 110, 120}), -1.0); }) ==
          Errc::invalid_input);
}

TEST_CASE("vol properties: nonnegative, scale invariant, sqrt-of-frequency") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> level(20.0, 400.0);
    std::uniform_real_distribution<double> step(-0.3, 0.3);
    std::uniform_real_distribution<double> scale_dist(1e-3, 1e3);
    std::uniform_int_distribution<int> len(3, 24);

    for (int round = 0; round < 300; ++round) {
        std::vector<double> values{level(rng)};
        const int n = len(rng);
        for (int i = 1; i < n; ++i) values.push_back(values.back() * std::exp(step(rng)));

        const auto base = series_of(values);
        const double sigma = annualized_vol(base);
        CHECK(sigma >= 0.0);

        const double k = scale_dist(rng);
        std::vector<double> scaled = values;
        for (auto& v : scaled) v *= k;
        CHECK(annualized_vol(series_of(scaled)) == Approx(sigma).margin(1e-12));

        const double ppy = 12.0;
        CHECK(annualized_vol(base, ppy) == Approx(sigma * std::sqrt(ppy)).margin(1e-12));
    }
}
