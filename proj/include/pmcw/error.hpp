// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pmcw {

enum class ErrorCode {
    OddLength,
    IndivisibleCode,
    SearchTooLarge,
    BadCode,
    BadDuration,
    BadBand,
    BadMask,
    TooFewSamples,
    ZeroRange,
    BadNode,
    PnDurationTooShort,
    LengthMismatch,
    WindowedMap,
    OverExcluded,
    BadBin,
    EmptySection,
    LosNotFound,
    ConfigError,
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Library exception. Every failure the library reports carries one ErrorCode
/// so callers (and the CLI exit-code mapping) can branch without parsing text.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace pmcw
