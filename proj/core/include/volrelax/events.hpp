#pragma once

#include <chrono>
#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "volrelax/data.hpp"

namespace volrelax {

enum class Sign { unknown, crash, rally };
enum class Origin { unlabeled, endogenous, exogenous };

[[nodiscard]] std::string_view to_string(Sign sign) noexcept;
[[nodiscard]] std::string_view to_string(Origin origin) noexcept;

struct Event {
    std::size_t index = 0;   // position t' in the volatility series
    double magnitude = 0.0;  // |R(t')|
    Sign sign = Sign::unknown;
    Origin origin = Origin::unlabeled;
};

/// Large-volatility events |R(t')| > zeta_abs = zeta_multiple * sigma.
struct EventSet {
    std::vector<Event> events;
    double zeta_multiple = 0.0;
    double zeta_abs = 0.0;
    double sigma = 0.0;

    [[nodiscard]] std::size_t size() const noexcept { return events.size(); }
    [[nodiscard]] bool empty() const noexcept { return events.empty(); }
    [[nodiscard]] std::vector<std::size_t> indices() const;
};

struct SelectOptions {
    /// Minimum spacing between kept events; 0 keeps every exceedance. When
    /// positive, exceedances are visited by decreasing magnitude and an event
    /// is dropped if a larger one lies closer than this many steps.
    std::size_t min_separation = 0;
};

/// All t' with |R(t')| > m * sigma, in order. Throws NoEvents when empty and
/// InvalidArgument unless m > 1.
[[nodiscard]] EventSet select_events(const VolatilitySeries& vol, double m, const SeriesStats& stats,
                                     const SelectOptions& options = {});

/// crash iff R(t') < 0, rally iff R(t') > 0.
[[nodiscard]] EventSet classify_sign(const ReturnSeries& returns, const EventSet& events);

struct EventLabel {
    std::chrono::sys_days date;
    Origin origin = Origin::exogenous;
    std::string note;
};

/// Lines `YYYY-MM-DD,exogenous|endogenous[,note]`; `#` starts a comment line.
[[nodiscard]] std::vector<EventLabel> parse_labels(std::istream& in);
[[nodiscard]] std::vector<EventLabel> read_labels(const std::string& path);

struct LabelResult {
    EventSet events;
    /// Label dates that matched no event (warning-level, not an error).
    std::vector<std::chrono::sys_days> unmatched;
};

/// Matches labels to events by the calendar date of calendar[event.index];
/// pass the close timestamps so a label dates the day the move happened.
/// Unlabeled events become endogenous.
[[nodiscard]] LabelResult apply_labels(const EventSet& events, std::span<const EventLabel> labels,
                                       std::span<const Timestamp> calendar);

struct EventFilter {
    std::optional<Sign> sign;
    std::optional<Origin> origin;

    [[nodiscard]] bool matches(const Event& e) const noexcept;
};

[[nodiscard]] EventSet filter_events(const EventSet& events, const EventFilter& filter);

/// Maps events onto the reversed series of length n: t' -> n - 1 - t'.
[[nodiscard]] EventSet reindex_reversed(const EventSet& events, std::size_t n);

/// `index  timestamp  return  magnitude  sign  origin` rows.
void write_events_tsv(std::ostream& out, const EventSet& events, const ReturnSeries& returns);

} // namespace volrelax
