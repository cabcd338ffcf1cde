#pragma once

#include <ostream>
#include <vector>

#include "volrelax/data.hpp"

namespace volrelax {

/// Multiplicative time-of-day volatility factors, normalized to mean 1.
struct IntradayPattern {
    std::vector<double> factors;
    int slots_per_day = 0;
};

/// A(s) = mean |R| in slot s divided by the mean of the slot means.
/// Throws DailyCadence for slots_per_day < 2 and EmptySlot when a slot has
/// no samples or a zero mean.
[[nodiscard]] IntradayPattern estimate_pattern(const VolatilitySeries& vol);

/// Divides each value by its slot factor and marks the series adjusted.
[[nodiscard]] VolatilitySeries remove_pattern(const VolatilitySeries& vol,
                                              const IntradayPattern& pattern);

/// `slot<TAB>factor` rows.
void write_pattern_tsv(std::ostream& out, const IntradayPattern& pattern);

} // namespace volrelax
