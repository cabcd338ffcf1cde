#include "volrelax/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string_view>

#include <fmt/format.h>

#include "volrelax/error.hpp"
#include "volrelax/rng.hpp"

namespace volrelax {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line, char delim) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(delim, start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

bool parse_double(std::string_view text, double& out) {
    if (text.empty()) return false;
    if (text.front() == '+') text.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

std::string cadence_label(std::int64_t step) {
    if (step % 60 == 0) return fmt::format("{}min", step / 60);
    return fmt::format("{}s", step);
}

// Fills cadence, step and slots_per_day from the parsed timestamps.
void derive_calendar(PriceSeries& series, int slots_override, std::size_t header_lines) {
    const auto& recs = series.records;
    const bool any_daily = std::any_of(recs.begin(), recs.end(),
                                       [](const PriceRecord& r) { return r.timestamp.date_only; });
    const bool all_daily = std::all_of(recs.begin(), recs.end(),
                                       [](const PriceRecord& r) { return r.timestamp.date_only; });
    if (any_daily && !all_daily) {
        throw Error(ErrorCode::MalformedRow, "file mixes date-only and intraday timestamps");
    }
    if (all_daily) {
        series.cadence = "daily";
        series.slots_per_day = 1;
        series.step_seconds = 0;
        return;
    }

    std::int64_t step = 0;
    for (std::size_t i = 1; i < recs.size(); ++i) {
        if (recs[i].timestamp.date() != recs[i - 1].timestamp.date()) continue;
        const std::int64_t gap = recs[i].timestamp.seconds - recs[i - 1].timestamp.seconds;
        step = step == 0 ? gap : std::gcd(step, gap);
    }
    if (step == 0) {
        // One record per day: the calendar cannot define intraday slots.
        series.cadence = "daily";
        series.slots_per_day = 1;
        series.step_seconds = 0;
        return;
    }
    std::int64_t open = recs.front().timestamp.seconds_of_day();
    std::int64_t close = open;
    for (const auto& r : recs) {
        open = std::min(open, r.timestamp.seconds_of_day());
        close = std::max(close, r.timestamp.seconds_of_day());
    }
    const int derived = static_cast<int>((close - open) / step) + 1;
    if (slots_override > 0 && slots_override < derived) {
        throw Error(ErrorCode::SlotMismatch,
                    fmt::format("slots_per_day {} is smaller than the {} slots observed (line {})",
                                slots_override, derived, header_lines));
    }
    series.cadence = cadence_label(step);
    series.step_seconds = step;
    series.slots_per_day = slots_override > 0 ? slots_override : derived;
}

int slot_of(const PriceSeries& series, std::size_t i, std::int64_t open) {
    if (series.is_daily() || series.step_seconds == 0) return 0;
    return static_cast<int>((series.records[i].timestamp.seconds_of_day() - open) /
                            series.step_seconds);
}

} // namespace

PriceSeries parse_price_csv(std::istream& in, const CsvSchema& schema) {
    PriceSeries series;
    std::string line;
    std::size_t line_no = 0;
    bool first_data_line = true;
    const std::size_t needed = std::max(schema.timestamp_column, schema.price_column) + 1;

    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view view = trim(line);
        if (view.empty() || view.front() == '#') continue;
        const auto fields = split(view, schema.delimiter);
        if (fields.size() < needed) {
            throw Error(ErrorCode::MalformedRow,
                        fmt::format("line {}: expected {} columns", line_no, needed));
        }
        double price = 0.0;
        const bool price_ok = parse_double(fields[schema.price_column], price);
        if (first_data_line) {
            first_data_line = false;
            if (!price_ok && !parse_timestamp(fields[schema.timestamp_column])) continue; // header
        }
        if (!price_ok || !std::isfinite(price)) {
            throw Error(ErrorCode::MalformedRow, fmt::format("line {}: bad price '{}'", line_no,
                                                             fields[schema.price_column]));
        }
        const auto ts = parse_timestamp(fields[schema.timestamp_column]);
        if (!ts) {
            throw Error(ErrorCode::MalformedRow, fmt::format("line {}: bad timestamp '{}'", line_no,
                                                             fields[schema.timestamp_column]));
        }
        if (price <= 0.0) {
            throw Error(ErrorCode::NonPositivePrice,
                        fmt::format("line {}: price {} is not positive", line_no, price));
        }
        if (!series.records.empty() && !(series.records.back().timestamp < *ts)) {
            throw Error(ErrorCode::NonMonotoneTimestamp,
                        fmt::format("line {}: timestamp {} does not increase", line_no,
                                    format_timestamp(*ts)));
        }
        series.records.push_back({*ts, price});
    }
    if (series.records.size() < 2) {
        throw Error(ErrorCode::TooShort, fmt::format("{} price records, need at least 2",
                                                     series.records.size()));
    }
    derive_calendar(series, schema.slots_per_day, line_no);
    return series;
}

PriceSeries read_price_csv(const std::string& path, const CsvSchema& schema) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
    return parse_price_csv(in, schema);
}

void write_price_csv(std::ostream& out, const PriceSeries& prices) {
    out << "timestamp,price\n";
    for (const auto& r : prices.records) {
        out << format_timestamp(r.timestamp) << ',' << fmt::format("{:.17g}", r.price) << '\n';
    }
}

ReturnSeries log_returns(const PriceSeries& prices, const ReturnOptions& options) {
    if (prices.size() < 2) throw Error(ErrorCode::TooShort, "need at least 2 prices");
    std::int64_t open = 0;
    if (!prices.is_daily()) {
        open = prices.records.front().timestamp.seconds_of_day();
        for (const auto& r : prices.records) open = std::min(open, r.timestamp.seconds_of_day());
    }

    ReturnSeries out;
    out.slots_per_day = prices.slots_per_day;
    const std::size_t n = prices.size() - 1;
    out.values.reserve(n);
    out.slot_index.reserve(n);
    out.timestamps.reserve(n);
    out.close_timestamps.reserve(n);
    const bool drop = options.drop_session_crossing && !prices.is_daily();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = prices.records[i];
        const auto& b = prices.records[i + 1];
        if (drop && a.timestamp.date() != b.timestamp.date()) continue;
        out.values.push_back(std::log(b.price) - std::log(a.price));
        out.slot_index.push_back(slot_of(prices, i, open));
        out.timestamps.push_back(a.timestamp);
        out.close_timestamps.push_back(b.timestamp);
    }
    return out;
}

VolatilitySeries absolute_volatility(const ReturnSeries& returns) {
    VolatilitySeries vol;
    vol.values.resize(returns.values.size());
    std::transform(returns.values.begin(), returns.values.end(), vol.values.begin(),
                   [](double r) { return std::abs(r); });
    vol.slot_index = returns.slot_index;
    vol.slots_per_day = returns.slots_per_day;
    vol.timestamps = returns.timestamps;
    vol.adjusted = false;
    return vol;
}

SeriesStats mean_volatility(const VolatilitySeries& vol) {
    if (vol.values.empty()) throw Error(ErrorCode::EmptySeries, "mean of an empty series");
    // Summing in sorted order makes the result depend only on the multiset,
    // so reversal and shuffling leave sigma bit-identical.
    std::vector<double> sorted = vol.values;
    std::sort(sorted.begin(), sorted.end());
    const double total = std::accumulate(sorted.begin(), sorted.end(), 0.0);
    return {total / static_cast<double>(sorted.size()), sorted.size()};
}

ReturnSeries reverse(const ReturnSeries& returns) {
    ReturnSeries out = returns;
    std::reverse(out.values.begin(), out.values.end());
    std::reverse(out.slot_index.begin(), out.slot_index.end());
    std::reverse(out.timestamps.begin(), out.timestamps.end());
    std::reverse(out.close_timestamps.begin(), out.close_timestamps.end());
    return out;
}

VolatilitySeries reverse(const VolatilitySeries& vol) {
    VolatilitySeries out = vol;
    std::reverse(out.values.begin(), out.values.end());
    std::reverse(out.slot_index.begin(), out.slot_index.end());
    std::reverse(out.timestamps.begin(), out.timestamps.end());
    return out;
}

ReturnSeries shuffle_surrogate(const ReturnSeries& returns, std::uint64_t seed) {
    ReturnSeries out = returns;
    Rng rng(seed);
    auto& v = out.values;
    for (std::size_t i = v.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.below(i));
        std::swap(v[i - 1], v[j]);
    }
    return out;
}

ReturnSeries with_periodic_slots(ReturnSeries returns, int slots_per_day) {
    if (slots_per_day < 1) throw Error(ErrorCode::InvalidArgument, "slots_per_day must be >= 1");
    returns.slots_per_day = slots_per_day;
    returns.slot_index.resize(returns.values.size());
    for (std::size_t i = 0; i < returns.values.size(); ++i) {
        returns.slot_index[i] = static_cast<int>(i % static_cast<std::size_t>(slots_per_day));
    }
    return returns;
}

std::vector<double> prices_from_returns(std::span<const double> returns, double initial_price) {
    std::vector<double> prices;
    prices.reserve(returns.size() + 1);
    double log_p = std::log(initial_price);
    prices.push_back(initial_price);
    for (double r : returns) {
        log_p += r;
        prices.push_back(std::exp(log_p));
    }
    return prices;
}

} // namespace volrelax
