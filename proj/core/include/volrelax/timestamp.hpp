#pragma once

#include <chrono>
#include <cstdint>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace volrelax {

/// Calendar instant at second resolution. Daily files carry date-only stamps.
struct Timestamp {
    std::int64_t seconds = 0; // since 1970-01-01T00:00:00 (civil, no zone)
    bool date_only = false;

    [[nodiscard]] std::chrono::sys_days date() const noexcept;
    [[nodiscard]] std::int64_t seconds_of_day() const noexcept;

    friend auto operator<=>(const Timestamp& a, const Timestamp& b) noexcept {
        return a.seconds <=> b.seconds;
    }
    friend bool operator==(const Timestamp& a, const Timestamp& b) noexcept {
        return a.seconds == b.seconds;
    }
};

/// Accepts `YYYY-MM-DD` or `YYYY-MM-DDTHH:MM[:SS]` (a space may replace `T`).
[[nodiscard]] std::optional<Timestamp> parse_timestamp(std::string_view text);
[[nodiscard]] std::optional<std::chrono::sys_days> parse_date(std::string_view text);

[[nodiscard]] Timestamp make_timestamp(std::chrono::sys_days day, std::int64_t seconds_of_day = 0,
                                       bool date_only = false);

[[nodiscard]] std::string format_timestamp(const Timestamp& ts);
[[nodiscard]] std::string format_date(std::chrono::sys_days day);

} // namespace volrelax
