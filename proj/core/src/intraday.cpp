#include "volrelax/intraday.hpp"

#include <fmt/format.h>

#include "volrelax/error.hpp"

namespace volrelax {

IntradayPattern estimate_pattern(const VolatilitySeries& vol) {
    const int slots = vol.slots_per_day;
    if (slots < 2) {
        throw Error(ErrorCode::DailyCadence, "intraday pattern needs at least 2 slots per day");
    }
    if (vol.slot_index.size() != vol.values.size()) {
        throw Error(ErrorCode::SlotMismatch, "series has no slot labels");
    }
    std::vector<double> sum(static_cast<std::size_t>(slots), 0.0);
    std::vector<std::size_t> count(static_cast<std::size_t>(slots), 0);
    for (std::size_t i = 0; i < vol.values.size(); ++i) {
        const int s = vol.slot_index[i];
        if (s < 0 || s >= slots) {
            throw Error(ErrorCode::SlotMismatch, fmt::format("slot {} out of range at {}", s, i));
        }
        sum[static_cast<std::size_t>(s)] += vol.values[i];
        ++count[static_cast<std::size_t>(s)];
    }

    IntradayPattern pattern;
    pattern.slots_per_day = slots;
    pattern.factors.resize(sum.size());
    double grand = 0.0;
    for (std::size_t s = 0; s < sum.size(); ++s) {
        if (count[s] == 0) throw Error(ErrorCode::EmptySlot, fmt::format("slot {} has no samples", s));
        pattern.factors[s] = sum[s] / static_cast<double>(count[s]);
        grand += pattern.factors[s];
    }
    grand /= static_cast<double>(slots);
    for (std::size_t s = 0; s < sum.size(); ++s) {
        if (!(pattern.factors[s] > 0.0)) {
            throw Error(ErrorCode::EmptySlot, fmt::format("slot {} has zero mean volatility", s));
        }
        pattern.factors[s] /= grand;
    }
    return pattern;
}

VolatilitySeries remove_pattern(const VolatilitySeries& vol, const IntradayPattern& pattern) {
    if (pattern.slots_per_day != vol.slots_per_day ||
        pattern.factors.size() != static_cast<std::size_t>(pattern.slots_per_day)) {
        throw Error(ErrorCode::SlotMismatch,
                    fmt::format("pattern has {} slots, series has {}", pattern.slots_per_day,
                                vol.slots_per_day));
    }
    if (vol.slot_index.size() != vol.values.size()) {
        throw Error(ErrorCode::SlotMismatch, "series has no slot labels");
    }
    VolatilitySeries out = vol;
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        const int s = vol.slot_index[i];
        if (s < 0 || s >= pattern.slots_per_day) {
            throw Error(ErrorCode::SlotMismatch, fmt::format("slot {} out of range at {}", s, i));
        }
        out.values[i] /= pattern.factors[static_cast<std::size_t>(s)];
    }
    out.adjusted = true;
    return out;
}

void write_pattern_tsv(std::ostream& out, const IntradayPattern& pattern) {
    out << "slot\tfactor\n";
    for (std::size_t s = 0; s < pattern.factors.size(); ++s) {
        out << s << '\t' << fmt::format("{:.17g}", pattern.factors[s]) << '\n';
    }
}

} // namespace volrelax
