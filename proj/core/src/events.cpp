#include "volrelax/events.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include <fmt/format.h>

#include "volrelax/error.hpp"

namespace volrelax {

std::string_view to_string(Sign sign) noexcept {
    switch (sign) {
    case Sign::crash: return "crash";
    case Sign::rally: return "rally";
    case Sign::unknown: break;
    }
    return "unknown";
}

std::string_view to_string(Origin origin) noexcept {
    switch (origin) {
    case Origin::endogenous: return "endogenous";
    case Origin::exogenous: return "exogenous";
    case Origin::unlabeled: break;
    }
    return "unlabeled";
}

std::vector<std::size_t> EventSet::indices() const {
    std::vector<std::size_t> out;
    out.reserve(events.size());
    for (const auto& e : events) out.push_back(e.index);
    return out;
}

EventSet select_events(const VolatilitySeries& vol, double m, const SeriesStats& stats,
                       const SelectOptions& options) {
    if (!(m > 1.0)) throw Error(ErrorCode::InvalidArgument, fmt::format("threshold multiple {} <= 1", m));
    EventSet set;
    set.zeta_multiple = m;
    set.sigma = stats.sigma;
    set.zeta_abs = m * stats.sigma;
    for (std::size_t i = 0; i < vol.values.size(); ++i) {
        if (vol.values[i] > set.zeta_abs) set.events.push_back({i, vol.values[i]});
    }

    if (options.min_separation > 0 && set.events.size() > 1) {
        std::vector<std::size_t> order(set.events.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return set.events[a].magnitude > set.events[b].magnitude;
        });
        std::map<std::size_t, std::size_t> kept; // series index -> event slot
        for (std::size_t k : order) {
            const std::size_t t = set.events[k].index;
            auto next = kept.lower_bound(t);
            if (next != kept.end() && next->first - t < options.min_separation) continue;
            if (next != kept.begin() && t - std::prev(next)->first < options.min_separation) continue;
            kept.emplace(t, k);
        }
        std::vector<Event> declustered;
        declustered.reserve(kept.size());
        for (const auto& [t, k] : kept) declustered.push_back(set.events[k]);
        set.events = std::move(declustered);
    }

    if (set.events.empty()) {
        throw Error(ErrorCode::NoEvents, fmt::format("no volatility exceeds {} sigma", m));
    }
    return set;
}

EventSet classify_sign(const ReturnSeries& returns, const EventSet& events) {
    EventSet out = events;
    for (auto& e : out.events) {
        if (e.index >= returns.values.size()) {
            throw Error(ErrorCode::LengthMismatch, fmt::format("event index {} outside series", e.index));
        }
        const double r = returns.values[e.index];
        if (r < 0.0) {
            e.sign = Sign::crash;
        } else if (r > 0.0) {
            e.sign = Sign::rally;
        } else {
            throw Error(ErrorCode::ZeroReturnEvent,
                        fmt::format("event at {} has zero return; indices are misaligned", e.index));
        }
    }
    return out;
}

std::vector<EventLabel> parse_labels(std::istream& in) {
    std::vector<EventLabel> labels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto c1 = line.find(',');
        if (c1 == std::string::npos) {
            throw Error(ErrorCode::MalformedRow, fmt::format("label line {}: missing origin", line_no));
        }
        const auto c2 = line.find(',', c1 + 1);
        const std::string date_text = line.substr(first, c1 - first);
        const std::string origin_text =
            line.substr(c1 + 1, c2 == std::string::npos ? std::string::npos : c2 - c1 - 1);
        const auto date = parse_date(date_text);
        if (!date) {
            throw Error(ErrorCode::MalformedRow, fmt::format("label line {}: bad date '{}'", line_no, date_text));
        }
        EventLabel label{*date, Origin::exogenous, {}};
        if (origin_text == "exogenous") {
            label.origin = Origin::exogenous;
        } else if (origin_text == "endogenous") {
            label.origin = Origin::endogenous;
        } else {
            throw Error(ErrorCode::MalformedRow,
                        fmt::format("label line {}: origin '{}' is not exogenous|endogenous", line_no, origin_text));
        }
        if (c2 != std::string::npos) label.note = line.substr(c2 + 1);
        labels.push_back(std::move(label));
    }
    return labels;
}

std::vector<EventLabel> read_labels(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
    return parse_labels(in);
}

LabelResult apply_labels(const EventSet& events, std::span<const EventLabel> labels,
                         std::span<const Timestamp> calendar) {
    LabelResult result{events, {}};
    std::map<std::chrono::sys_days, Origin> by_date;
    for (const auto& l : labels) by_date[l.date] = l.origin;
    std::map<std::chrono::sys_days, bool> used;

    for (auto& e : result.events.events) {
        if (e.index >= calendar.size()) {
            throw Error(ErrorCode::LengthMismatch, fmt::format("event index {} has no timestamp", e.index));
        }
        const auto day = calendar[e.index].date();
        const auto it = by_date.find(day);
        if (it != by_date.end()) {
            e.origin = it->second;
            used[day] = true;
        } else {
            e.origin = Origin::endogenous;
        }
    }
    for (const auto& [day, origin] : by_date) {
        if (!used.count(day)) result.unmatched.push_back(day);
    }
    return result;
}

bool EventFilter::matches(const Event& e) const noexcept {
    if (sign && e.sign != *sign) return false;
    if (origin && e.origin != *origin) return false;
    return true;
}

EventSet filter_events(const EventSet& events, const EventFilter& filter) {
    EventSet out = events;
    out.events.clear();
    std::copy_if(events.events.begin(), events.events.end(), std::back_inserter(out.events),
                 [&](const Event& e) { return filter.matches(e); });
    return out;
}

EventSet reindex_reversed(const EventSet& events, std::size_t n) {
    EventSet out = events;
    for (auto& e : out.events) {
        if (e.index >= n) throw Error(ErrorCode::LengthMismatch, "event index outside series");
        e.index = n - 1 - e.index;
    }
    std::reverse(out.events.begin(), out.events.end());
    return out;
}

void write_events_tsv(std::ostream& out, const EventSet& events, const ReturnSeries& returns) {
    out << "index\ttimestamp\treturn\tmagnitude\tsign\torigin\n";
    for (const auto& e : events.events) {
        const std::string ts =
            e.index < returns.timestamps.size() ? format_timestamp(returns.timestamps[e.index]) : "-";
        const double r = e.index < returns.values.size() ? returns.values[e.index] : 0.0;
        out << e.index << '\t' << ts << '\t' << fmt::format("{:.17g}", r) << '\t'
            << fmt::format("{:.17g}", e.magnitude) << '\t' << to_string(e.sign) << '\t'
            << to_string(e.origin) << '\n';
    }
}

} // namespace volrelax
