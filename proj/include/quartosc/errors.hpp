#pragma once

#include <stdexcept>
#include <string>

namespace quartosc {

// One code per rejection or breakdown mode. Config codes mean the caller
// handed us unusable input; numeric codes mean an engine broke down while
// running. The CLI maps ConfigError to exit code 2 and NumericError to 3.
enum class ErrorCode {
    NonPositiveMass,
    NonPositiveFrequency,
    NegativeBeta,
    UnnormalizedState,
    EmptyTimeGrid,
    NonMonotonicTimes,
    NonPositiveNodeCount,
    WrongMode,
    NonPositiveSpread,
    BasisTooSmall,
    NoConvergence,
    GridTooCoarse,
    TooFewPeaks,
    NonPositiveEnvelope,
    BadFitWindow,
    NonCoherentState,
    SingularGaussian,
    StepTooLarge,
    BadConfigFile,
    BadSeriesFile,
};

const char* error_name(ErrorCode code);

class ConfigError : public std::invalid_argument {
public:
    ConfigError(ErrorCode code, const std::string& detail);
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class NumericError : public std::runtime_error {
public:
    NumericError(ErrorCode code, const std::string& detail);
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace quartosc
