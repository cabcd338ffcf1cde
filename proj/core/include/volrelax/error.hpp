#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace volrelax {

enum class ErrorCode {
    InvalidArgument,
    MalformedRow,
    NonMonotoneTimestamp,
    NonPositivePrice,
    TooShort,
    EmptySeries,
    EmptySlot,
    DailyCadence,
    SlotMismatch,
    LengthMismatch,
    NoEvents,
    ZeroReturnEvent,
    DegenerateZ,
    InsufficientPositivePoints,
    NonConvergence,
    BootstrapUnstable,
    Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// True for failures caused by the input data rather than by fitting.
[[nodiscard]] bool is_data_error(ErrorCode code) noexcept;

} // namespace volrelax
