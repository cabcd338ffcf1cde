#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace volrelax {

struct SimplexOptions {
    double tolerance = 1e-8;   // simplex diameter (max-norm) at convergence
    std::size_t max_iterations = 10000;
};

struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Nelder-Mead downhill simplex. Non-finite objective values are treated as
/// +infinity, which confines the search to the feasible region. After the
/// first convergence the simplex is rebuilt around the best vertex until a
/// restart no longer improves it.
[[nodiscard]] SimplexResult minimize_simplex(const std::function<double(const std::vector<double>&)>& f,
                                             std::vector<double> start, std::vector<double> step,
                                             const SimplexOptions& options = {});

} // namespace volrelax
