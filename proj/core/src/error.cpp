#include "volrelax/error.hpp"

namespace volrelax {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::NonMonotoneTimestamp: return "NonMonotoneTimestamp";
    case ErrorCode::NonPositivePrice: return "NonPositivePrice";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::EmptySeries: return "EmptySeries";
    case ErrorCode::EmptySlot: return "EmptySlot";
    case ErrorCode::DailyCadence: return "DailyCadence";
    case ErrorCode::SlotMismatch: return "SlotMismatch";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NoEvents: return "NoEvents";
    case ErrorCode::ZeroReturnEvent: return "ZeroReturnEvent";
    case ErrorCode::DegenerateZ: return "DegenerateZ";
    case ErrorCode::InsufficientPositivePoints: return "InsufficientPositivePoints";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::BootstrapUnstable: return "BootstrapUnstable";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

bool is_data_error(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::MalformedRow:
    case ErrorCode::NonMonotoneTimestamp:
    case ErrorCode::NonPositivePrice:
    case ErrorCode::TooShort:
    case ErrorCode::EmptySeries:
    case ErrorCode::EmptySlot:
    case ErrorCode::DailyCadence:
    case ErrorCode::SlotMismatch:
    case ErrorCode::LengthMismatch:
    case ErrorCode::ZeroReturnEvent:
    case ErrorCode::Io:
        return true;
    default:
        return false;
    }
}

} // namespace volrelax
