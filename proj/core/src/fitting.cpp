#include "volrelax/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "volrelax/error.hpp"
#include "volrelax/optimize.hpp"

namespace volrelax {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Samples {
    std::vector<double> t;
    std::vector<double> log_v;
};

// Mean squared log residual with the amplitude profiled out; also returns
// log A through `log_a`.
double log_residual(const Samples& s, double p, double tau, double* log_a = nullptr) {
    const std::size_t n = s.t.size();
    double mean = 0.0;
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double g = cumulative_kernel(s.t[i], p, tau);
        if (!(g > 0.0) || !std::isfinite(g)) return kInf;
        r[i] = s.log_v[i] - std::log(g);
        mean += r[i];
    }
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double x : r) ss += (x - mean) * (x - mean);
    if (log_a) *log_a = mean;
    return ss / static_cast<double>(n);
}

} // namespace

std::string_view to_string(TauMode mode) noexcept {
    return mode == TauMode::free ? "free" : "zero";
}

std::string_view to_string(FitMethod method) noexcept {
    return method == FitMethod::full_fit ? "full_fit" : "tail_slope";
}

double cumulative_kernel(double t, double p, double tau) noexcept {
    const double q = 1.0 - p;
    if (!(tau >= 0.0) || !(t >= 0.0)) return kNaN;
    if (tau == 0.0) {
        if (q < kLogLimitWidth) return kNaN;
        return std::pow(t, q) / q;
    }
    const double l = std::log1p(t / tau);
    if (std::abs(q) < kLogLimitWidth) return l;
    return std::pow(tau, q) * std::expm1(q * l) / q;
}

std::vector<int> log_spaced_lags(int t_min, int t_max, std::size_t samples) {
    std::vector<int> lags;
    if (t_min < 1 || t_max < t_min) return lags;
    const std::size_t k = std::max<std::size_t>(samples, 30);
    const auto span = static_cast<std::size_t>(t_max - t_min) + 1;
    if (span <= k) {
        lags.resize(span);
        std::iota(lags.begin(), lags.end(), t_min);
        return lags;
    }
    const double ratio = static_cast<double>(t_max) / static_cast<double>(t_min);
    for (std::size_t i = 0; i < k; ++i) {
        const double frac = static_cast<double>(i) / static_cast<double>(k - 1);
        int t = static_cast<int>(std::lround(static_cast<double>(t_min) * std::pow(ratio, frac)));
        t = std::clamp(t, t_min, t_max);
        if (lags.empty() || t != lags.back()) lags.push_back(t);
    }
    return lags;
}

PowerLawFit fit_cumulative(std::span<const double> cum, const FitConfig& config) {
    const int last = static_cast<int>(cum.size());
    const int t_max = config.t_max == 0 ? last : config.t_max;
    if (config.t_min < 1 || t_max <= config.t_min || t_max > last) {
        throw Error(ErrorCode::InvalidArgument,
                    fmt::format("fit range [{}, {}] outside computed lags 1..{}", config.t_min, t_max, last));
    }
    std::size_t positive = 0;
    for (int t = config.t_min; t <= t_max; ++t) {
        const double v = cum[static_cast<std::size_t>(t - 1)];
        if (v > 0.0 && std::isfinite(v)) ++positive;
    }
    if (positive < 10) {
        throw Error(ErrorCode::InsufficientPositivePoints,
                    fmt::format("{} positive points in [{}, {}], need 10", positive, config.t_min, t_max));
    }

    const auto lags = log_spaced_lags(config.t_min, t_max, config.samples);
    Samples s;
    for (int t : lags) {
        const double v = cum[static_cast<std::size_t>(t - 1)];
        if (v > 0.0 && std::isfinite(v)) {
            s.t.push_back(static_cast<double>(t));
            s.log_v.push_back(std::log(v));
        }
    }
    const std::size_t dropped = lags.size() - s.t.size();
    if (static_cast<double>(dropped) > 0.2 * static_cast<double>(lags.size())) {
        throw Error(ErrorCode::InsufficientPositivePoints,
                    fmt::format("{} of {} sampled points are not positive", dropped, lags.size()));
    }

    const bool free_tau = config.tau_mode == TauMode::free;
    const double tau_max = kMaxTauRatio * static_cast<double>(t_max);
    auto objective = [&](const std::vector<double>& x) {
        const double tau = free_tau ? x[1] * x[1] : 0.0;
        if (x[0] < kExponentRange[0] || x[0] > kExponentRange[1] || tau > tau_max) return kInf;
        return log_residual(s, x[0], tau);
    };

    struct Start {
        double value;
        std::vector<double> x;
    };
    std::vector<Start> grid;
    for (int i = 0; i < 5; ++i) {
        const double p0 = 0.05 + (1.2 - 0.05) * i / 4.0;
        for (int j = 0; j < (free_tau ? 5 : 1); ++j) {
            std::vector<double> x{p0};
            if (free_tau) x.push_back(std::sqrt(50.0 * j / 4.0));
            grid.push_back({objective(x), x});
        }
    }
    std::stable_sort(grid.begin(), grid.end(), [](const Start& a, const Start& b) { return a.value < b.value; });

    SimplexResult best;
    best.value = kInf;
    bool have_best = false;
    const std::vector<double> step = free_tau ? std::vector<double>{0.05, 0.5} : std::vector<double>{0.05};
    for (std::size_t k = 0; k < std::min<std::size_t>(3, grid.size()); ++k) {
        auto run = minimize_simplex(objective, grid[k].x, step, {1e-8, 10000});
        if (!have_best || run.value < best.value) {
            best = std::move(run);
            have_best = true;
        }
    }
    if (!best.converged || !std::isfinite(best.value)) {
        throw Error(ErrorCode::NonConvergence,
                    fmt::format("simplex did not reach tolerance 1e-8 within {} iterations", best.iterations));
    }

    PowerLawFit fit;
    fit.p = best.x[0];
    fit.tau = free_tau ? best.x[1] * best.x[1] : 0.0;
    double log_a = 0.0;
    const double mse = log_residual(s, fit.p, fit.tau, &log_a);
    fit.A = std::exp(log_a);
    fit.rms_log_residual = std::sqrt(mse);
    fit.t_min = config.t_min;
    fit.t_max = t_max;
    fit.method = FitMethod::full_fit;
    return fit;
}

PowerLawFit tail_slope(std::span<const double> cum, int t_lo, int t_hi) {
    const int last = static_cast<int>(cum.size());
    if (t_lo < 1 || t_hi < t_lo || t_hi > last) {
        throw Error(ErrorCode::InvalidArgument,
                    fmt::format("tail range [{}, {}] outside computed lags 1..{}", t_lo, t_hi, last));
    }
    std::vector<double> x, y;
    for (int t = t_lo; t <= t_hi; ++t) {
        const double v = cum[static_cast<std::size_t>(t - 1)];
        if (v > 0.0 && std::isfinite(v)) {
            x.push_back(std::log(static_cast<double>(t)));
            y.push_back(std::log(v));
        }
    }
    if (x.size() < 5) {
        throw Error(ErrorCode::InsufficientPositivePoints,
                    fmt::format("{} positive tail points, need 5", x.size()));
    }
    const auto n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - intercept - slope * x[i];
        ss += r * r;
    }

    PowerLawFit fit;
    fit.p = 1.0 - slope;
    fit.tau = 0.0;
    fit.A = std::exp(intercept);
    fit.t_min = t_lo;
    fit.t_max = t_hi;
    fit.rms_log_residual = std::sqrt(ss / n);
    fit.method = FitMethod::tail_slope;
    return fit;
}

} // namespace volrelax
