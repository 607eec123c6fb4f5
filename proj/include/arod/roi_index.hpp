#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "arod/errors.hpp"

namespace arod::roi {

inline constexpr std::size_t kComponentCount = 5;
inline constexpr double kWeightSumTolerance = 1e-12;

// Score of 100 means "at the discipline/size benchmark".
inline constexpr double kBenchmarkLevel = 100.0;

inline constexpr std::array<const char*, kComponentCount> kComponentNames = {
    "publications", "citations", "grants", "innovation", "societal",
};

// The five normalized index inputs, in index points. All finite and >= 0.
struct ComponentScores {
    double publications = 0.0;
    double citations = 0.0;
    double grants = 0.0;
    double innovation = 0.0;
    double societal = 0.0;

    [[nodiscard]] constexpr std::array<double, kComponentCount> as_array() const noexcept {
        return {publications, citations, grants, innovation, societal};
    }
};

inline void validate(const ComponentScores& scores) {
    const auto values = scores.as_array();
    for (std::size_t i = 0; i < kComponentCount; ++i) {
        if (!std::isfinite(values[i]))
            fail(Errc::non_finite, std::string(kComponentNames[i]) + " score is not finite");
        if (values[i] < 0.0)
            fail(Errc::validation_error, std::string(kComponentNames[i]) + " score is negative");
    }
}

// Normalized component weights: each in [0,1], summing to 1 within 1e-12.
// Obtain one via normalize_weights or from_raw; invariants hold by construction.
class WeightVector {
public:
    [[nodiscard]] static WeightVector from_raw(const std::array<double, kComponentCount>& w) {
        double sum = 0.0;
        for (std::size_t i = 0; i < kComponentCount; ++i) {
            if (!std::isfinite(w[i])) fail(Errc::non_finite, "weight is not finite");
            if (w[i] < 0.0 || w[i] > 1.0)
                fail(Errc::validation_error,
                     "weight " + std::string(kComponentNames[i]) + " outside [0,1]");
            sum += w[i];
        }
        if (std::abs(sum - 1.0) > kWeightSumTolerance)
            fail(Errc::validation_error, "weights do not sum to 1");
        WeightVector out;
        out.w_ = w;
        return out;
    }

    [[nodiscard]] double operator[](std::size_t i) const noexcept { return w_[i]; }
    [[nodiscard]] const std::array<double, kComponentCount>& values() const noexcept { return w_; }

private:
    WeightVector() = default;
    friend WeightVector normalize_weights(const std::array<double, kComponentCount>&);

    std::array<double, kComponentCount> w_{};
};

// Scales nonnegative raw weights proportionally so they sum to 1.
inline WeightVector normalize_weights(const std::array<double, kComponentCount>& raw) {
    double sum = 0.0;
    for (double v : raw) {
        if (!std::isfinite(v)) fail(Errc::non_finite, "raw weight is not finite");
        if (v < 0.0) fail(Errc::validation_error, "raw weight is negative");
        sum += v;
    }
    if (sum == 0.0) fail(Errc::all_zero_weights, "all raw weights are zero");
    WeightVector out;
    for (std::size_t i = 0; i < kComponentCount; ++i) out.w_[i] = raw[i] / sum;
    return out;
}

// raw / baseline in index points: at-baseline performance maps to 100.
inline double normalize_component(double raw, double baseline) {
    if (!std::isfinite(raw) || !std::isfinite(baseline))
        fail(Errc::non_finite, "component value is not finite");
    if (baseline <= 0.0) fail(Errc::zero_baseline, "baseline must be > 0");
    if (raw < 0.0) fail(Errc::validation_error, "raw component value is negative");
    return kBenchmarkLevel * raw / baseline;
}

// The composite index: the weighted sum of the five component scores.
inline double compute_roi(const ComponentScores& scores, const WeightVector& weights) {
    validate(scores);
    const auto values = scores.as_array();
    double acc = 0.0;
    for (std::size_t i = 0; i < kComponentCount; ++i) acc += weights[i] * values[i];
    return acc;
}

}  // namespace arod::roi
