#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "volrelax/data.hpp"
#include "volrelax/events.hpp"

namespace volrelax {

enum class TauMode { free, fixed_zero };
enum class FitMethod { full_fit, tail_slope };

[[nodiscard]] std::string_view to_string(TauMode mode) noexcept;
[[nodiscard]] std::string_view to_string(FitMethod method) noexcept;

/// Offset power law for a cumulative profile,
///   V(t) = A * g(t; p, tau),  g = ((t + tau)^(1-p) - tau^(1-p)) / (1 - p),
/// which tends to A * ln(1 + t/tau) as p -> 1. For tail_slope fits
/// V(t) = A * t^(1-p) and tau = 0.
struct PowerLawFit {
    double A = 0.0;
    double p = 0.0;
    double tau = 0.0;
    int t_min = 1;
    int t_max = 1;
    double rms_log_residual = 0.0;
    std::optional<double> p_stderr;
    FitMethod method = FitMethod::full_fit;
};

struct FitConfig {
    int t_min = 5;
    int t_max = 0;          // 0 = last computed lag
    TauMode tau_mode = TauMode::free;
    std::size_t samples = 50; // log-spaced points (at least 30)
};

/// Switch to the logarithmic limit of g when |1 - p| is below this.
inline constexpr double kLogLimitWidth = 1e-6;

/// Search box of fit_cumulative. Beyond it the family degenerates: for
/// tau >> t_max every p yields a straight line and A underflows.
inline constexpr double kExponentRange[2] = {-1.0, 3.0};
inline constexpr double kMaxTauRatio = 100.0;

/// g(t; p, tau) above; NaN where the kernel is undefined (tau = 0, p >= 1).
[[nodiscard]] double cumulative_kernel(double t, double p, double tau) noexcept;

/// Log-spaced integer lags in [t_min, t_max], deduplicated. Returns every
/// lag when the range holds no more than `samples` points.
[[nodiscard]] std::vector<int> log_spaced_lags(int t_min, int t_max, std::size_t samples);

/// `cum[t-1]` holds V(t). Least squares in log V over the log-spaced lags,
/// A in closed form, (p, tau) by multistart simplex from a 5x5 grid over
/// p in [0.05, 1.2], tau in [0, 50], confined to p in kExponentRange and
/// tau <= kMaxTauRatio * t_max. Throws InsufficientPositivePoints or
/// NonConvergence.
[[nodiscard]] PowerLawFit fit_cumulative(std::span<const double> cum, const FitConfig& config = {});

/// OLS of log V on log t over every lag in [t_lo, t_hi] with V > 0;
/// p = 1 - slope.
[[nodiscard]] PowerLawFit tail_slope(std::span<const double> cum, int t_lo, int t_hi);

struct BootstrapConfig {
    int max_lag = 100;
    FitConfig fit;
    std::size_t replicas = 200;
    std::uint64_t seed = 1;
    unsigned threads = 0; // 0 = hardware concurrency
};

struct BootstrapResult {
    double stderr_minus = 0.0;
    double stderr_plus = 0.0;
    /// Per-replica exponents; NaN marks a failed replica.
    std::vector<double> p_minus;
    std::vector<double> p_plus;
    std::size_t failures = 0;
};

/// Resamples events with replacement (replica r draws from seed + r),
/// recomputes both profiles and fits, and reports the sample standard
/// deviation of p per side. Throws BootstrapUnstable when more than 10% of
/// replicas fail.
[[nodiscard]] BootstrapResult bootstrap_errors(const VolatilitySeries& vol, const EventSet& events,
                                               const BootstrapConfig& config);

} // namespace volrelax
