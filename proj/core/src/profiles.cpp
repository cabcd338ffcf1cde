#include "volrelax/profiles.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "volrelax/error.hpp"

namespace volrelax {

ConditionedProfile remanent_profile(const VolatilitySeries& vol, const EventSet& events, int max_lag) {
    if (max_lag < 1) throw Error(ErrorCode::InvalidArgument, "max_lag must be >= 1");
    if (events.empty()) throw Error(ErrorCode::NoEvents, "no events to condition on");
    const std::size_t n = vol.values.size();
    const auto T = static_cast<std::size_t>(max_lag);
    const double sigma = events.sigma;

    double peak = 0.0;
    for (const auto& e : events.events) {
        if (e.index >= n) throw Error(ErrorCode::LengthMismatch, "event index outside series");
        peak += vol.values[e.index];
    }
    peak /= static_cast<double>(events.size());
    const double z = peak - sigma;
    if (!(z > 1e-12 * sigma) || !(z > 0.0)) {
        throw Error(ErrorCode::DegenerateZ,
                    fmt::format("conditioned mean {} does not exceed sigma {}", peak, sigma));
    }

    std::vector<double> sum_minus(T + 1, 0.0), sum_plus(T + 1, 0.0);
    std::vector<std::size_t> cnt_minus(T + 1, 0), cnt_plus(T + 1, 0);
    // Event-major accumulation: every lag sees the events in the same fixed
    // order, so results are bit-stable.
    for (const auto& e : events.events) {
        const std::size_t t0 = e.index;
        const std::size_t back = std::min(T, t0);
        for (std::size_t t = 0; t <= back; ++t) {
            sum_minus[t] += vol.values[t0 - t];
            ++cnt_minus[t];
        }
        const std::size_t fwd = std::min(T, n - 1 - t0);
        for (std::size_t t = 0; t <= fwd; ++t) {
            sum_plus[t] += vol.values[t0 + t];
            ++cnt_plus[t];
        }
    }

    ConditionedProfile p;
    p.max_lag = max_lag;
    p.z = z;
    p.sigma = sigma;
    p.n_events = events.size();
    p.v_minus.resize(T + 1);
    p.v_plus.resize(T + 1);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t t = 0; t <= T; ++t) {
        p.v_minus[t] = cnt_minus[t] ? (sum_minus[t] / static_cast<double>(cnt_minus[t]) - sigma) / z : nan;
        p.v_plus[t] = cnt_plus[t] ? (sum_plus[t] / static_cast<double>(cnt_plus[t]) - sigma) / z : nan;
    }
    p.v_minus[0] = 1.0;
    p.v_plus[0] = 1.0;
    p.counts_minus = std::move(cnt_minus);
    p.counts_plus = std::move(cnt_plus);
    return p;
}

CumulativeProfile cumulative(const ConditionedProfile& profile) {
    CumulativeProfile c;
    const auto T = static_cast<std::size_t>(profile.max_lag);
    c.V_minus.resize(T);
    c.V_plus.resize(T);
    double am = 0.0, ap = 0.0;
    for (std::size_t t = 1; t <= T; ++t) {
        am += profile.v_minus[t];
        ap += profile.v_plus[t];
        c.V_minus[t - 1] = am;
        c.V_plus[t - 1] = ap;
    }
    return c;
}

OmoriProfile omori_counts(const VolatilitySeries& vol, const EventSet& mainshocks, double m1,
                          const SeriesStats& stats, int max_lag) {
    if (max_lag < 1) throw Error(ErrorCode::InvalidArgument, "max_lag must be >= 1");
    if (!(m1 > 0.0) || !(m1 < mainshocks.zeta_multiple)) {
        throw Error(ErrorCode::InvalidArgument,
                    fmt::format("aftershock threshold {} must lie in (0, {})", m1, mainshocks.zeta_multiple));
    }
    if (mainshocks.empty()) throw Error(ErrorCode::NoEvents, "no main shocks");
    const std::size_t n = vol.values.size();
    const auto T = static_cast<std::size_t>(max_lag);
    const double zeta1 = m1 * stats.sigma;

    // Integer totals keep the result independent of summation order.
    std::vector<std::size_t> tot_minus(T, 0), tot_plus(T, 0);
    for (const auto& e : mainshocks.events) {
        if (e.index >= n) throw Error(ErrorCode::LengthMismatch, "event index outside series");
        std::size_t run_minus = 0, run_plus = 0;
        for (std::size_t s = 1; s <= T; ++s) {
            if (s <= e.index && vol.values[e.index - s] > zeta1) ++run_minus;
            if (e.index + s < n && vol.values[e.index + s] > zeta1) ++run_plus;
            tot_minus[s - 1] += run_minus;
            tot_plus[s - 1] += run_plus;
        }
    }

    OmoriProfile o;
    o.zeta_main = mainshocks.zeta_abs;
    o.zeta1 = zeta1;
    o.n_mainshocks = mainshocks.size();
    o.N_minus.resize(T);
    o.N_plus.resize(T);
    const auto k = static_cast<double>(mainshocks.size());
    for (std::size_t s = 0; s < T; ++s) {
        o.N_minus[s] = static_cast<double>(tot_minus[s]) / k;
        o.N_plus[s] = static_cast<double>(tot_plus[s]) / k;
    }
    return o;
}

void write_profile_tsv(std::ostream& out, const ConditionedProfile& profile, const CumulativeProfile& cum) {
    out << "t\tv_minus\tv_plus\tV_minus\tV_plus\tcount_minus\tcount_plus\n";
    for (std::size_t t = 0; t < profile.v_minus.size(); ++t) {
        const double vm = t == 0 ? 0.0 : cum.V_minus[t - 1];
        const double vp = t == 0 ? 0.0 : cum.V_plus[t - 1];
        out << fmt::format("{}\t{:.17g}\t{:.17g}\t{:.17g}\t{:.17g}\t{}\t{}\n", t, profile.v_minus[t],
                           profile.v_plus[t], vm, vp, profile.counts_minus[t], profile.counts_plus[t]);
    }
}

void write_omori_tsv(std::ostream& out, const OmoriProfile& omori) {
    out << "t\tN_minus\tN_plus\n";
    for (std::size_t t = 0; t < omori.N_minus.size(); ++t) {
        out << fmt::format("{}\t{:.17g}\t{:.17g}\n", t + 1, omori.N_minus[t], omori.N_plus[t]);
    }
}

} // namespace volrelax
