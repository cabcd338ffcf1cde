#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include <fmt/format.h>

#include "volrelax/error.hpp"
#include "volrelax/fitting.hpp"
#include "volrelax/profiles.hpp"
#include "volrelax/rng.hpp"

namespace volrelax {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Welford; identical inputs give exactly zero.
double sample_stddev(const std::vector<double>& xs) {
    double mean = 0.0, m2 = 0.0;
    std::size_t k = 0;
    for (double x : xs) {
        if (std::isnan(x)) continue;
        ++k;
        const double d = x - mean;
        mean += d / static_cast<double>(k);
        m2 += d * (x - mean);
    }
    return k > 1 ? std::sqrt(m2 / static_cast<double>(k - 1)) : kNaN;
}

void run_replica(const VolatilitySeries& vol, const EventSet& events, const BootstrapConfig& config,
                 std::size_t r, double& p_minus, double& p_plus) {
    Rng rng(config.seed + r);
    EventSet sample = events;
    const std::uint64_t n = events.size();
    for (auto& e : sample.events) e = events.events[static_cast<std::size_t>(rng.below(n))];

    p_minus = kNaN;
    p_plus = kNaN;
    try {
        const auto profile = remanent_profile(vol, sample, config.max_lag);
        const auto cum = cumulative(profile);
        try {
            p_minus = fit_cumulative(cum.V_minus, config.fit).p;
        } catch (const Error&) {
        }
        try {
            p_plus = fit_cumulative(cum.V_plus, config.fit).p;
        } catch (const Error&) {
        }
    } catch (const Error&) {
    }
}

} // namespace

BootstrapResult bootstrap_errors(const VolatilitySeries& vol, const EventSet& events,
                                 const BootstrapConfig& config) {
    if (config.replicas < 50) throw Error(ErrorCode::InvalidArgument, "bootstrap needs at least 50 replicas");
    if (events.size() < 5) throw Error(ErrorCode::InvalidArgument, "bootstrap needs at least 5 events");

    const std::size_t b = config.replicas;
    BootstrapResult result;
    result.p_minus.assign(b, kNaN);
    result.p_plus.assign(b, kNaN);

    unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, b));
    // Replica r always lands in slot r, so the outcome does not depend on the
    // thread count.
    auto worker = [&](unsigned w) {
        for (std::size_t r = w; r < b; r += threads) {
            run_replica(vol, events, config, r, result.p_minus[r], result.p_plus[r]);
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w);
    }

    for (std::size_t r = 0; r < b; ++r) {
        if (std::isnan(result.p_minus[r]) || std::isnan(result.p_plus[r])) ++result.failures;
    }
    if (static_cast<double>(result.failures) > 0.1 * static_cast<double>(b)) {
        throw Error(ErrorCode::BootstrapUnstable,
                    fmt::format("{} of {} bootstrap replicas failed", result.failures, b));
    }
    result.stderr_minus = sample_stddev(result.p_minus);
    result.stderr_plus = sample_stddev(result.p_plus);
    return result;
}

} // namespace volrelax
