#include "quartosc/errors.hpp"

namespace quartosc {

const char* error_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonPositiveMass: return "NonPositiveMass";
        case ErrorCode::NonPositiveFrequency: return "NonPositiveFrequency";
        case ErrorCode::NegativeBeta: return "NegativeBeta";
        case ErrorCode::UnnormalizedState: return "UnnormalizedState";
        case ErrorCode::EmptyTimeGrid: return "EmptyTimeGrid";
        case ErrorCode::NonMonotonicTimes: return "NonMonotonicTimes";
        case ErrorCode::NonPositiveNodeCount: return "NonPositiveNodeCount";
        case ErrorCode::WrongMode: return "WrongMode";
        case ErrorCode::NonPositiveSpread: return "NonPositiveSpread";
        case ErrorCode::BasisTooSmall: return "BasisTooSmall";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::GridTooCoarse: return "GridTooCoarse";
        case ErrorCode::TooFewPeaks: return "TooFewPeaks";
        case ErrorCode::NonPositiveEnvelope: return "NonPositiveEnvelope";
        case ErrorCode::BadFitWindow: return "BadFitWindow";
        case ErrorCode::NonCoherentState: return "NonCoherentState";
        case ErrorCode::SingularGaussian: return "SingularGaussian";
        case ErrorCode::StepTooLarge: return "StepTooLarge";
        case ErrorCode::BadConfigFile: return "BadConfigFile";
        case ErrorCode::BadSeriesFile: return "BadSeriesFile";
    }
    return "UnknownError";
}

namespace {

std::string format_message(ErrorCode code, const std::string& detail) {
    std::string msg = error_name(code);
    if (!detail.empty()) {
        msg += ": ";
        msg += detail;
    }
    return msg;
}

}  // namespace

ConfigError::ConfigError(ErrorCode code, const std::string& detail)
    : std::invalid_argument(format_message(code, detail)), code_(code) {}

NumericError::NumericError(ErrorCode code, const std::string& detail)
    : std::runtime_error(format_message(code, detail)), code_(code) {}

}  // namespace quartosc
