// SPDX-License-Identifier: Apache-2.0
#include "pmcw/error.hpp"

namespace pmcw {

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::OddLength: return "OddLength";
    case ErrorCode::IndivisibleCode: return "IndivisibleCode";
    case ErrorCode::SearchTooLarge: return "SearchTooLarge";
    case ErrorCode::BadCode: return "BadCode";
    case ErrorCode::BadDuration: return "BadDuration";
    case ErrorCode::BadBand: return "BadBand";
    case ErrorCode::BadMask: return "BadMask";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::ZeroRange: return "ZeroRange";
    case ErrorCode::BadNode: return "BadNode";
    case ErrorCode::PnDurationTooShort: return "PnDurationTooShort";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::WindowedMap: return "WindowedMap";
    case ErrorCode::OverExcluded: return "OverExcluded";
    case ErrorCode::BadBin: return "BadBin";
    case ErrorCode::EmptySection: return "EmptySection";
    case ErrorCode::LosNotFound: return "LOSNotFound";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

} // namespace pmcw
