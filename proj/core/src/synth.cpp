#include "volrelax/synth.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "volrelax/error.hpp"
#include "volrelax/rng.hpp"

namespace volrelax {

namespace {

// Half-normal scale giving mean 1.
const double kHalfNormalScale = std::sqrt(std::numbers::pi / 2.0);

ReturnSeries blank_series(std::size_t n) {
    ReturnSeries out;
    out.values.assign(n, 0.0);
    out.slot_index.assign(n, 0);
    out.slots_per_day = 1;
    return out;
}

} // namespace

ReturnSeries gen_iid_gaussian(std::size_t n, double sigma0, std::uint64_t seed) {
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "series length must be >= 2");
    if (!(sigma0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma0 must be positive");
    Rng rng(seed);
    ReturnSeries out = blank_series(n);
    const double scale = sigma0 * kHalfNormalScale;
    for (auto& v : out.values) v = scale * rng.normal();
    return out;
}

PlantedSeries gen_planted_relaxation(const PlantedRelaxationSpec& spec) {
    const double b_after = spec.boost, b_before = spec.effective_boost_before();
    const double p_after = spec.p, p_before = spec.effective_p_before();
    if (spec.n < 2 || !(spec.sigma0 > 0.0) || !(spec.shock_rate >= 0.0) || !(b_after >= 0.0) ||
        !(b_before >= 0.0) || !(spec.tau >= 0.0) || !(spec.shock_magnitude > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "planted relaxation parameters must be positive");
    }
    for (double p : {p_after, p_before}) {
        if (!(p > 0.0 && p < 1.5)) throw Error(ErrorCode::InvalidArgument, fmt::format("exponent {} outside (0, 1.5)", p));
    }
    if (spec.tau == 0.0 && spec.kernel_cutoff == 0) {
        throw Error(ErrorCode::InvalidArgument, "kernel_cutoff must be positive");
    }

    Rng rng(spec.seed);
    const std::size_t n = spec.n;
    PlantedSeries out{blank_series(n), {}};

    const double rate = spec.shock_rate / 1e5;
    std::vector<char> is_shock(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (rng.uniform() < rate) {
            is_shock[i] = 1;
            out.shocks.push_back(i);
        }
    }

    const std::size_t cutoff = spec.kernel_cutoff;
    std::vector<double> after(cutoff + 1, 0.0), before(cutoff + 1, 0.0);
    for (std::size_t d = 1; d <= cutoff; ++d) {
        after[d] = b_after * std::pow(static_cast<double>(d) + spec.tau, -p_after);
        before[d] = b_before * std::pow(static_cast<double>(d) + spec.tau, -p_before);
    }
    std::vector<double> field(n, 0.0);
    for (std::size_t s : out.shocks) {
        for (std::size_t d = 1; d <= cutoff && s + d < n; ++d) field[s + d] += after[d];
        for (std::size_t d = 1; d <= cutoff && d <= s; ++d) field[s - d] += before[d];
    }

    const double scale = spec.sigma0 * kHalfNormalScale;
    const double shock = spec.shock_magnitude * spec.sigma0;
    for (std::size_t i = 0; i < n; ++i) {
        const double sign = rng.sign();
        if (is_shock[i]) {
            out.returns.values[i] = sign * shock;
        } else {
            out.returns.values[i] = sign * scale * (1.0 + field[i]) * std::abs(rng.normal());
        }
    }
    return out;
}

ReturnSeries gen_intraday_modulated(const ReturnSeries& base, std::span<const double> factors) {
    if (factors.empty()) throw Error(ErrorCode::InvalidArgument, "no intraday factors");
    for (double f : factors) {
        if (!(f > 0.0)) throw Error(ErrorCode::InvalidArgument, "intraday factors must be positive");
    }
    const int slots = static_cast<int>(factors.size());
    ReturnSeries out = base;
    const bool labeled = base.slot_index.size() == base.values.size() && base.slots_per_day > 1;
    if (!labeled) {
        out = with_periodic_slots(std::move(out), slots);
    } else if (base.slots_per_day != slots) {
        throw Error(ErrorCode::SlotMismatch,
                    fmt::format("{} factors for a series with {} slots", factors.size(), base.slots_per_day));
    }
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        out.values[i] *= factors[static_cast<std::size_t>(out.slot_index[i])];
    }
    return out;
}

PriceSeries to_price_series(const ReturnSeries& returns, int slots_per_day, std::int64_t step_seconds,
                            double initial_price) {
    using namespace std::chrono;
    if (slots_per_day < 1) throw Error(ErrorCode::InvalidArgument, "slots_per_day must be >= 1");
    const bool daily = slots_per_day == 1;
    if (!daily && (step_seconds <= 0 || 34200 + step_seconds * (slots_per_day - 1) >= 86400)) {
        throw Error(ErrorCode::InvalidArgument, "intraday session does not fit in one day");
    }
    const auto prices = prices_from_returns(returns.values, initial_price);

    PriceSeries series;
    series.records.reserve(prices.size());
    sys_days day{year{2000} / January / 3};
    int slot = 0;
    for (double price : prices) {
        const Timestamp ts = daily ? make_timestamp(day, 0, true)
                                   : make_timestamp(day, 34200 + step_seconds * slot, false);
        series.records.push_back({ts, price});
        if (++slot == slots_per_day) {
            slot = 0;
            do {
                day += days{1};
            } while (weekday{day} == Saturday || weekday{day} == Sunday);
        }
    }
    series.slots_per_day = slots_per_day;
    series.step_seconds = daily ? 0 : step_seconds;
    series.cadence = daily ? "daily" : (step_seconds % 60 == 0 ? fmt::format("{}min", step_seconds / 60)
                                                               : fmt::format("{}s", step_seconds));
    return series;
}

} // namespace volrelax
