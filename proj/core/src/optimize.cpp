#include "volrelax/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "volrelax/error.hpp"

namespace volrelax {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double safe_eval(const std::function<double(const std::vector<double>&)>& f, const std::vector<double>& x) {
    const double v = f(x);
    return std::isfinite(v) ? v : kInf;
}

struct Run {
    std::vector<double> x;
    double value;
    std::size_t iterations;
    bool converged;
};

Run run_simplex(const std::function<double(const std::vector<double>&)>& f, const std::vector<double>& start,
                const std::vector<double>& step, double tol, std::size_t budget) {
    const std::size_t dim = start.size();
    std::vector<std::vector<double>> pts(dim + 1, start);
    for (std::size_t i = 0; i < dim; ++i) pts[i + 1][i] += step[i];
    std::vector<double> vals(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i) vals[i] = safe_eval(f, pts[i]);

    std::vector<std::size_t> order(dim + 1);
    std::size_t it = 0;
    for (; it < budget; ++it) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        const std::size_t best = order.front(), worst = order.back(), second = order[dim - 1];

        double diameter = 0.0;
        for (std::size_t i = 0; i <= dim; ++i) {
            for (std::size_t k = 0; k < dim; ++k) diameter = std::max(diameter, std::abs(pts[i][k] - pts[best][k]));
        }
        if (diameter < tol && std::isfinite(vals[best])) {
            return {pts[best], vals[best], it, true};
        }

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == worst) continue;
            for (std::size_t k = 0; k < dim; ++k) centroid[k] += pts[i][k] / static_cast<double>(dim);
        }
        auto along = [&](double coef) {
            std::vector<double> p(dim);
            for (std::size_t k = 0; k < dim; ++k) p[k] = centroid[k] + coef * (pts[worst][k] - centroid[k]);
            return p;
        };

        auto reflected = along(-1.0);
        const double fr = safe_eval(f, reflected);
        if (fr < vals[best]) {
            auto expanded = along(-2.0);
            const double fe = safe_eval(f, expanded);
            if (fe < fr) {
                pts[worst] = std::move(expanded);
                vals[worst] = fe;
            } else {
                pts[worst] = std::move(reflected);
                vals[worst] = fr;
            }
            continue;
        }
        if (fr < vals[second]) {
            pts[worst] = std::move(reflected);
            vals[worst] = fr;
            continue;
        }
        const bool outside = fr < vals[worst];
        auto contracted = along(outside ? -0.5 : 0.5);
        const double fc = safe_eval(f, contracted);
        if (fc < (outside ? fr : vals[worst])) {
            pts[worst] = std::move(contracted);
            vals[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == best) continue;
            for (std::size_t k = 0; k < dim; ++k) pts[i][k] = pts[best][k] + 0.5 * (pts[i][k] - pts[best][k]);
            vals[i] = safe_eval(f, pts[i]);
        }
    }
    const auto best = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
    return {pts[best], vals[best], it, false};
}

} // namespace

SimplexResult minimize_simplex(const std::function<double(const std::vector<double>&)>& f,
                               std::vector<double> start, std::vector<double> step,
                               const SimplexOptions& options) {
    if (start.empty() || start.size() != step.size()) {
        throw Error(ErrorCode::InvalidArgument, "simplex start and step sizes differ");
    }
    SimplexResult result{start, safe_eval(f, start), 0, false};
    std::size_t used = 0;
    std::vector<double> scale = step;
    for (int restart = 0; restart < 20; ++restart) {
        if (used >= options.max_iterations) break;
        const Run run = run_simplex(f, result.x, scale, options.tolerance, options.max_iterations - used);
        used += run.iterations;
        const bool improved = run.value < result.value;
        const double gain = result.value - run.value;
        if (improved) {
            result.x = run.x;
            result.value = run.value;
        }
        result.converged = run.converged;
        if (!run.converged) break;
        // A restart that barely moves the optimum ends the search.
        if (restart > 0 && (!improved || gain <= 1e-15 * (1.0 + std::abs(result.value)))) break;
        for (auto& s : scale) s *= 0.1;
    }
    result.iterations = used;
    return result;
}

} // namespace volrelax
