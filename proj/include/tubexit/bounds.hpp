#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tubexit/exit_solver.hpp"
#include "tubexit/geometry.hpp"
#include "tubexit/profile.hpp"

namespace tubexit {
namespace detail {

// log(1 - cos^n(r)) without cancellation: 1 - exp(n log cos r) via expm1.
inline double log_one_minus_cos_pow(int n, double r) {
    return std::log(-std::expm1(double(n) * log_cos(r)));
}

// log F_{delta,k,n}(r).  Base case
//   F_{delta,n}(r) = (delta - r)/sin(delta) * (1 - cos^n r)/(n cos^{n-1} r)
// and for k >= 2 the proof's recursion
//   F_k(r) = k F_{k-1}((r+delta)/2) * (delta-r) / (2 cos^{n-1} r sin((r+delta)/2))
//                 * (1 - cos^n r)/n,
// folded iteratively along the midpoint chain r, (r+delta)/2, ...
inline double log_lower_bound_F(int n, double delta, int k, double r) {
    std::vector<double> chain(k);
    chain[0] = r;
    for (int j = 1; j < k; ++j) chain[j] = 0.5 * (chain[j - 1] + delta);

    const double ln_n = std::log(double(n));
    double lf = std::log(delta - chain[k - 1]) - std::log(std::sin(delta)) +
                log_one_minus_cos_pow(n, chain[k - 1]) - ln_n -
                double(n - 1) * log_cos(chain[k - 1]);
    for (int j = k - 1; j >= 1; --j) {
        const double rj = chain[j - 1];
        lf += std::log(double(j + 1)) + std::log(delta - rj) - std::log(2.0) -
              double(n - 1) * log_cos(rj) - std::log(std::sin(chain[j])) +
              log_one_minus_cos_pow(n, rj) - ln_n;
    }
    return lf;
}

} // namespace detail

// F_{delta,k,n}(r), the Theorem 1(i) / Corollary 2(i) lower bound for the
// k-th tube exit moment, evaluated in log space.
inline double lower_bound_F(const TubeGeometry& geom, int k, double r) {
    if (k < 1)
        throw std::invalid_argument("lower_bound_F: k must be >= 1");
    if (!(r > 0.0) || !(r < geom.delta))
        throw std::domain_error("lower_bound_F: r must lie in (0, delta)");
    return std::exp(detail::log_lower_bound_F(geom.n, geom.delta, k, r));
}

inline double log_lower_bound_F(const TubeGeometry& geom, int k, double r) {
    if (k < 1)
        throw std::invalid_argument("log_lower_bound_F: k must be >= 1");
    if (!(r > 0.0) || !(r < geom.delta))
        throw std::domain_error("log_lower_bound_F: r must lie in (0, delta)");
    return detail::log_lower_bound_F(geom.n, geom.delta, k, r);
}

// G_{delta,n} = (1 - cos(pi/2 - delta)) / (n cos(pi/2 - delta)), the uniform
// Theorem 1(ii) upper bound for the ball exit time; cos(pi/2 - delta) = sin delta.
// Factored through the n = 2 value so the algebraic collapse
// G(n) = G(2) * 2/n holds bit-exactly in floating point.
inline double upper_bound_G(const TubeGeometry& geom) {
    const double sd = std::sin(geom.delta);
    const double g2 = (1.0 - sd) / (2.0 * sd);
    return g2 * (2.0 / double(geom.n));
}

// k! (v_{delta,1,n}(0))^k, the Corollary 2(ii) uniform cap for the k-th ball
// exit moment.
inline double factorial_moment_cap(const BallGeometry& geom, int k,
                                   const KernelAccuracy& acc = {}) {
    if (k < 1)
        throw std::invalid_argument("factorial_moment_cap: k must be >= 1");
    const double v0 = exit_time_ball(geom, 0.0, acc);
    double cap = 1.0;
    for (int j = 1; j <= k; ++j) cap *= double(j) * v0;
    return cap;
}

// F values along increasing n at a fixed radius; materializes the
// divergence lim_{n->inf} F_{delta,n}(r) = infinity.
inline std::vector<std::pair<int, double>>
limit_diagnostic(const TubeGeometry& geom, double r, const std::vector<int>& n_list) {
    if (!(r > 0.0) || !(r < geom.delta))
        throw std::domain_error("limit_diagnostic: r must lie in (0, delta)");
    std::vector<std::pair<int, double>> out;
    out.reserve(n_list.size());
    for (int n : n_list)
        out.emplace_back(n, lower_bound_F(TubeGeometry(n, geom.delta), 1, r));
    return out;
}

// Bound profiles on uniform grids (endpoints carry the continuous limits).
inline BoundProfile lower_bound_profile(const TubeGeometry& geom, int k, int grid_size) {
    if (k < 1)
        throw std::invalid_argument("lower_bound_profile: k must be >= 1");
    if (grid_size < 2)
        throw std::invalid_argument("lower_bound_profile: grid_size must be >= 2");
    BoundProfile b;
    b.domain = Domain::tube(geom);
    b.k = k;
    b.kind = BoundKind::lower_F;
    b.grid = detail::uniform_grid(geom.delta, grid_size);
    b.values.resize(b.grid.size());
    b.values.front() = 0.0; // 1 - cos^n(0) vanishes
    b.values.back() = 0.0;  // (delta - r) factor vanishes
    for (std::size_t j = 1; j + 1 < b.grid.size(); ++j)
        b.values[j] = std::exp(detail::log_lower_bound_F(geom.n, geom.delta, k, b.grid[j]));
    return b;
}

inline BoundProfile upper_bound_profile(const TubeGeometry& geom, int grid_size) {
    if (grid_size < 2)
        throw std::invalid_argument("upper_bound_profile: grid_size must be >= 2");
    BoundProfile b;
    b.domain = Domain::ball(geom.complement());
    b.k = 1;
    b.kind = BoundKind::upper_G;
    b.grid = detail::uniform_grid(b.domain.radius, grid_size);
    b.values.assign(b.grid.size(), upper_bound_G(geom));
    return b;
}

inline BoundProfile factorial_cap_profile(const BallGeometry& geom, int k, int grid_size,
                                          const KernelAccuracy& acc = {}) {
    if (grid_size < 2)
        throw std::invalid_argument("factorial_cap_profile: grid_size must be >= 2");
    BoundProfile b;
    b.domain = Domain::ball(geom);
    b.k = k;
    b.kind = BoundKind::upper_factorial;
    b.grid = detail::uniform_grid(geom.rho, grid_size);
    b.values.assign(b.grid.size(), factorial_moment_cap(geom, k, acc));
    return b;
}

} // namespace tubexit
