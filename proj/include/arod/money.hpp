#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <string>
#include <string_view>

#include "arod/errors.hpp"

namespace arod {

// Cash amount in exact integer minor units (cents). Index arithmetic stays in
// doubles; a real-valued figure is converted to cash exactly once, rounding
// half-up (ties away from zero) at the final settlement amount.
class Money {
public:
    constexpr Money() = default;

    [[nodiscard]] static constexpr Money from_cents(std::int64_t cents) noexcept {
        Money m;
        m.cents_ = cents;
        return m;
    }

    // Currency units -> cents, rounded half-up.
    [[nodiscard]] static Money from_value(double units) {
        if (!std::isfinite(units)) fail(Errc::non_finite, "cash amount is not finite");
        const double cents = units * 100.0;
        if (std::abs(cents) >= 9.0e18) fail(Errc::validation_error, "cash amount out of range");
        return from_cents(std::llround(cents));
    }

    // Parses a plain decimal string with at most two fraction digits,
    // e.g. "1000", "-12150.00", "0.5". Anything else is rejected: cash
    // inputs are exact by contract, not floats.
    [[nodiscard]] static Money parse(std::string_view text) {
        const auto bad = [&]() -> void {
            fail(Errc::parse_error, "invalid cash amount '" + std::string(text) + "'");
        };
        std::string_view rest = text;
        bool negative = false;
        if (!rest.empty() && (rest.front() == '+' || rest.front() == '-')) {
            negative = rest.front() == '-';
            rest.remove_prefix(1);
        }
        if (rest.empty()) bad();

        std::int64_t whole = 0;
        std::size_t i = 0;
        if (rest[i] < '0' || rest[i] > '9') bad();
        for (; i < rest.size() && rest[i] >= '0' && rest[i] <= '9'; ++i) {
            if (whole > (std::numeric_limits<std::int64_t>::max() - 9) / 10) bad();
            whole = whole * 10 + (rest[i] - '0');
        }
        std::int64_t frac = 0;
        if (i < rest.size()) {
            if (rest[i] != '.') bad();
            ++i;
            const std::size_t frac_start = i;
            for (; i < rest.size() && rest[i] >= '0' && rest[i] <= '9'; ++i) {
                frac = frac * 10 + (rest[i] - '0');
            }
            const std::size_t digits = i - frac_start;
            if (i != rest.size() || digits == 0 || digits > 2) bad();
            if (digits == 1) frac *= 10;
        }
        if (whole > (std::numeric_limits<std::int64_t>::max() - frac) / 100) bad();
        const std::int64_t cents = whole * 100 + frac;
        return from_cents(negative ? -cents : cents);
    }

    [[nodiscard]] constexpr std::int64_t cents() const noexcept { return cents_; }
    [[nodiscard]] double value() const noexcept { return static_cast<double>(cents_) / 100.0; }
    [[nodiscard]] constexpr bool is_zero() const noexcept { return cents_ == 0; }
    [[nodiscard]] constexpr bool is_positive() const noexcept { return cents_ > 0; }

    // This amount scaled by a real factor, rounded half-up to a cent.
    [[nodiscard]] Money times(double factor) const {
        if (!std::isfinite(factor)) fail(Errc::non_finite, "scale factor is not finite");
        const double scaled = static_cast<double>(cents_) * factor;
        if (std::abs(scaled) >= 9.0e18) fail(Errc::validation_error, "cash amount out of range");
        return from_cents(std::llround(scaled));
    }

    // "-12150.00" — plain decimal, always two fraction digits.
    [[nodiscard]] std::string str() const {
        const std::int64_t abs = std::abs(cents_);
        std::string out = cents_ < 0 ? "-" : "";
        out += std::to_string(abs / 100);
        const std::int64_t frac = abs % 100;
        out += '.';
        out += static_cast<char>('0' + frac / 10);
        out += static_cast<char>('0' + frac % 10);
        return out;
    }

    // "-12,150.00" — thousands-grouped for human-readable output.
    [[nodiscard]] std::string str_grouped() const {
        std::string plain = str();
        const std::size_t start = plain.front() == '-' ? 1 : 0;
        const std::size_t dot = plain.find('.');
        std::string out = plain.substr(0, start);
        const std::size_t digits = dot - start;
        for (std::size_t i = 0; i < digits; ++i) {
            if (i != 0 && (digits - i) % 3 == 0) out += ',';
            out += plain[start + i];
        }
        out += plain.substr(dot);
        return out;
    }

    constexpr Money& operator+=(Money rhs) noexcept {
        cents_ += rhs.cents_;
        return *this;
    }
    constexpr Money& operator-=(Money rhs) noexcept {
        cents_ -= rhs.cents_;
        return *this;
    }
    [[nodiscard]] friend constexpr Money operator+(Money a, Money b) noexcept { return from_cents(a.cents_ + b.cents_); }
    [[nodiscard]] friend constexpr Money operator-(Money a, Money b) noexcept { return from_cents(a.cents_ - b.cents_); }
    [[nodiscard]] friend constexpr Money operator-(Money a) noexcept { return from_cents(-a.cents_); }

    friend constexpr auto operator<=>(Money, Money) noexcept = default;

private:
    std::int64_t cents_ = 0;
};

}  // namespace arod
