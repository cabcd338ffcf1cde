#include "volrelax/timestamp.hpp"

#include <charconv>

#include <fmt/format.h>

namespace volrelax {

namespace {

constexpr std::int64_t kSecondsPerDay = 86400;

bool read_int(std::string_view text, std::size_t pos, std::size_t width, int& out) {
    if (pos + width > text.size()) return false;
    for (std::size_t i = pos; i < pos + width; ++i) {
        if (text[i] < '0' || text[i] > '9') return false;
    }
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + width, out);
    return ec == std::errc{} && ptr == text.data() + pos + width;
}

} // namespace

std::chrono::sys_days Timestamp::date() const noexcept {
    std::int64_t days = seconds / kSecondsPerDay;
    if (seconds % kSecondsPerDay < 0) --days;
    return std::chrono::sys_days{std::chrono::days{days}};
}

std::int64_t Timestamp::seconds_of_day() const noexcept {
    std::int64_t r = seconds % kSecondsPerDay;
    return r < 0 ? r + kSecondsPerDay : r;
}

std::optional<std::chrono::sys_days> parse_date(std::string_view text) {
    using namespace std::chrono;
    int y = 0, m = 0, d = 0;
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    if (!read_int(text, 0, 4, y) || !read_int(text, 5, 2, m) || !read_int(text, 8, 2, d)) {
        return std::nullopt;
    }
    year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;
    return sys_days{ymd};
}

std::optional<Timestamp> parse_timestamp(std::string_view text) {
    if (text.size() == 10) {
        auto day = parse_date(text);
        if (!day) return std::nullopt;
        return make_timestamp(*day, 0, true);
    }
    if (text.size() != 16 && text.size() != 19) return std::nullopt;
    if (text[10] != 'T' && text[10] != ' ') return std::nullopt;
    auto day = parse_date(text.substr(0, 10));
    if (!day) return std::nullopt;
    int hh = 0, mm = 0, ss = 0;
    if (text[13] != ':' || !read_int(text, 11, 2, hh) || !read_int(text, 14, 2, mm)) {
        return std::nullopt;
    }
    if (text.size() == 19 && (text[16] != ':' || !read_int(text, 17, 2, ss))) return std::nullopt;
    if (hh > 23 || mm > 59 || ss > 59) return std::nullopt;
    return make_timestamp(*day, hh * 3600 + mm * 60 + ss, false);
}

Timestamp make_timestamp(std::chrono::sys_days day, std::int64_t seconds_of_day, bool date_only) {
    return Timestamp{day.time_since_epoch().count() * kSecondsPerDay + seconds_of_day, date_only};
}

std::string format_date(std::chrono::sys_days day) {
    std::chrono::year_month_day ymd{day};
    return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(ymd.year()),
                       static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
}

std::string format_timestamp(const Timestamp& ts) {
    std::string out = format_date(ts.date());
    if (ts.date_only) return out;
    const std::int64_t s = ts.seconds_of_day();
    return out + fmt::format("T{:02d}:{:02d}:{:02d}", s / 3600, (s / 60) % 60, s % 60);
}

} // namespace volrelax
