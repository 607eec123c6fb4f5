#pragma once

#include <stdexcept>
#include <string>

namespace arod {

// Domain error codes. The name is part of the CLI diagnostic contract:
// every failure prints a single "<Code>: <detail>" line on stderr.
enum class Errc {
    all_zero_weights,
    non_finite,
    zero_baseline,
    too_short,
    non_positive,
    invalid_input,
    invalid_vol,
    invalid_maturity,
    non_positive_roi,
    parse_error,
    validation_error,
    duplicate_record,
    duplicate_period,
    storage_failure,
    unknown_institution,
    invalid_config,
};

inline const char* errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::all_zero_weights:    return "AllZeroWeights";
        case Errc::non_finite:          return "NonFinite";
        case Errc::zero_baseline:       return "ZeroBaseline";
        case Errc::too_short:           return "TooShort";
        case Errc::non_positive:        return "NonPositive";
        case Errc::invalid_input:       return "InvalidInput";
        case Errc::invalid_vol:         return "InvalidVol";
        case Errc::invalid_maturity:    return "InvalidMaturity";
        case Errc::non_positive_roi:    return "NonPositiveRoi";
        case Errc::parse_error:         return "ParseError";
        case Errc::validation_error:    return "ValidationError";
        case Errc::duplicate_record:    return "DuplicateRecord";
        case Errc::duplicate_period:    return "DuplicatePeriod";
        case Errc::storage_failure:     return "StorageFailure";
        case Errc::unknown_institution: return "UnknownInstitution";
        case Errc::invalid_config:      return "InvalidConfig";
    }
    return "Error";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& detail)
        : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code) {}

    [[nodiscard]] Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& detail) {
    throw Error(code, detail);
}

}  // namespace arod
