#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "volrelax/data.hpp"

namespace volrelax {

/// Poisson main shocks with power-law excess volatility on both sides.
///
/// Every non-shock step at signed distance d from a shock t_s receives the
/// boost B_after * (d + tau)^(-p_after) for d > 0 and
/// B_before * (|d| + tau)^(-p_before) for d < 0, summed over all shocks within
/// `kernel_cutoff` steps. Its magnitude is half-normal with mean
/// sigma0 * (1 + total boost) and its sign is random. Shock steps carry
/// exactly shock_magnitude * sigma0 with random sign.
struct PlantedRelaxationSpec {
    std::size_t n = 1'000'000;
    double sigma0 = 1e-3;
    double shock_rate = 50.0;     // expected shocks per 1e5 steps
    double boost = 3.0;           // B after the shock
    double p = 0.3;               // exponent after the shock
    double tau = 0.0;
    double shock_magnitude = 30.0;
    std::uint64_t seed = 1;
    /// Before-shock parameters; negative means "same as after".
    double boost_before = -1.0;
    double p_before = -1.0;
    std::size_t kernel_cutoff = 2000;

    [[nodiscard]] double effective_boost_before() const noexcept { return boost_before < 0 ? boost : boost_before; }
    [[nodiscard]] double effective_p_before() const noexcept { return p_before < 0 ? p : p_before; }
};

struct PlantedSeries {
    ReturnSeries returns;
    std::vector<std::size_t> shocks;
};

/// Zero-mean Gaussian returns scaled so that E|R| = sigma0.
[[nodiscard]] ReturnSeries gen_iid_gaussian(std::size_t n, double sigma0, std::uint64_t seed);

/// Throws InvalidArgument for non-positive parameters or p outside (0, 1.5).
[[nodiscard]] PlantedSeries gen_planted_relaxation(const PlantedRelaxationSpec& spec);

/// Multiplies the value in slot s by factors[s]. The base series' slot
/// labels are used; a base without labels gets periodic ones.
[[nodiscard]] ReturnSeries gen_intraday_modulated(const ReturnSeries& base, std::span<const double> factors);

/// Attaches a synthetic trading calendar: weekdays from 2000-01-03, either
/// one record per day (slots_per_day = 1) or slots_per_day records spaced
/// step_seconds apart from 09:30.
[[nodiscard]] PriceSeries to_price_series(const ReturnSeries& returns, int slots_per_day,
                                          std::int64_t step_seconds, double initial_price = 100.0);

} // namespace volrelax
