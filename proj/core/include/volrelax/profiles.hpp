#pragma once

#include <cstddef>
#include <ostream>
#include <vector>

#include "volrelax/data.hpp"
#include "volrelax/events.hpp"

namespace volrelax {

/// Event-conditioned excess volatility at lags 0..max_lag:
///   v-(t) = (<|R(t'-t)|>_c - sigma) / Z,  v+(t) = (<|R(t'+t)|>_c - sigma) / Z,
///   Z = <|R(t')|>_c - sigma.
/// Each lag averages only the events whose shifted index is inside the
/// series; a lag with no contributing event holds NaN.
struct ConditionedProfile {
    int max_lag = 0;
    std::vector<double> v_minus;   // size max_lag + 1
    std::vector<double> v_plus;
    std::vector<std::size_t> counts_minus;
    std::vector<std::size_t> counts_plus;
    double z = 0.0;
    double sigma = 0.0;
    std::size_t n_events = 0;
};

/// Running sums V(t) = sum_{s=1..t} v(s); element t-1 holds V(t).
struct CumulativeProfile {
    std::vector<double> V_minus;
    std::vector<double> V_plus;
};

/// Mean number of exceedances of zeta1 within t steps before (N-) and after
/// (N+) each main shock; element t-1 holds N(t). Out-of-range steps count 0.
struct OmoriProfile {
    std::vector<double> N_minus;
    std::vector<double> N_plus;
    double zeta_main = 0.0;
    double zeta1 = 0.0;
    std::size_t n_mainshocks = 0;
};

/// Throws NoEvents, DegenerateZ (Z <= 1e-12 sigma) or InvalidArgument.
/// Repeated event indices are allowed (bootstrap resamples).
[[nodiscard]] ConditionedProfile remanent_profile(const VolatilitySeries& vol, const EventSet& events,
                                                  int max_lag);

[[nodiscard]] CumulativeProfile cumulative(const ConditionedProfile& profile);

/// Requires m1 < mainshocks.zeta_multiple.
[[nodiscard]] OmoriProfile omori_counts(const VolatilitySeries& vol, const EventSet& mainshocks,
                                        double m1, const SeriesStats& stats, int max_lag);

/// Columns: t v_minus v_plus V_minus V_plus count_minus count_plus, t = 0..T.
void write_profile_tsv(std::ostream& out, const ConditionedProfile& profile,
                       const CumulativeProfile& cum);

/// Columns: t N_minus N_plus, t = 1..T.
void write_omori_tsv(std::ostream& out, const OmoriProfile& omori);

} // namespace volrelax
