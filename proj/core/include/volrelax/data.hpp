#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include "volrelax/timestamp.hpp"

namespace volrelax {

struct PriceRecord {
    Timestamp timestamp;
    double price = 0.0;
};

/// Strictly time-ordered prices, at least two records.
struct PriceSeries {
    std::vector<PriceRecord> records;
    std::string cadence;     // "daily", "1min", "5min", or "<n>s"
    int slots_per_day = 1;   // 1 for daily data
    std::int64_t step_seconds = 0; // intraday step, 0 for daily

    [[nodiscard]] std::size_t size() const noexcept { return records.size(); }
    [[nodiscard]] bool is_daily() const noexcept { return slots_per_day == 1; }
};

/// Log-returns R(t) = ln P(t+1) - ln P(t). Value i is stamped with the
/// left record's timestamp and carries that record's intraday slot;
/// `close_timestamps` holds the right record's timestamp, the instant the
/// return is realized. Both are empty for generated series.
struct ReturnSeries {
    std::vector<double> values;
    std::vector<int> slot_index;
    int slots_per_day = 1;
    std::vector<Timestamp> timestamps;
    std::vector<Timestamp> close_timestamps;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
};

/// Volatility |R(t)|; `adjusted` is set once the intraday pattern is divided out.
struct VolatilitySeries {
    std::vector<double> values;
    std::vector<int> slot_index;
    int slots_per_day = 1;
    std::vector<Timestamp> timestamps;
    bool adjusted = false;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
};

struct SeriesStats {
    double sigma = 0.0;  // mean volatility
    std::size_t n = 0;
};

struct CsvSchema {
    std::size_t timestamp_column = 0;
    std::size_t price_column = 1;
    char delimiter = ',';
    /// Overrides the slots-per-day derived from the timestamps (0 = derive).
    int slots_per_day = 0;
};

/// Reads `timestamp,price` rows. A first row whose price does not parse is
/// taken as a header; blank lines and `#` comments are skipped.
[[nodiscard]] PriceSeries parse_price_csv(std::istream& in, const CsvSchema& schema = {});
[[nodiscard]] PriceSeries read_price_csv(const std::string& path, const CsvSchema& schema = {});

/// Writes `timestamp,price` rows with a header, full double precision.
void write_price_csv(std::ostream& out, const PriceSeries& prices);

struct ReturnOptions {
    /// Drop returns whose two records fall on different calendar days.
    bool drop_session_crossing = false;
};

[[nodiscard]] ReturnSeries log_returns(const PriceSeries& prices, const ReturnOptions& options = {});
[[nodiscard]] VolatilitySeries absolute_volatility(const ReturnSeries& returns);
[[nodiscard]] SeriesStats mean_volatility(const VolatilitySeries& vol);

/// Time reversal. Slot labels and timestamps travel with their values.
[[nodiscard]] ReturnSeries reverse(const ReturnSeries& returns);
[[nodiscard]] VolatilitySeries reverse(const VolatilitySeries& vol);

/// Seeded Fisher-Yates permutation of the values; slots stay with positions.
[[nodiscard]] ReturnSeries shuffle_surrogate(const ReturnSeries& returns, std::uint64_t seed);

/// Labels value i with slot i mod slots_per_day (generated intraday data).
[[nodiscard]] ReturnSeries with_periodic_slots(ReturnSeries returns, int slots_per_day);

/// Rebuilds a price path from P(0) and cumulative returns.
[[nodiscard]] std::vector<double> prices_from_returns(std::span<const double> returns,
                                                      double initial_price = 100.0);

} // namespace volrelax
