#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "tubexit/errors.hpp"
#include "tubexit/geometry.hpp"
#include "tubexit/interpolation.hpp"
#include "tubexit/kernels.hpp"
#include "tubexit/profile.hpp"
#include "tubexit/quadrature.hpp"

namespace tubexit {
namespace detail {

struct GkNode {
    double pos, wk, wg;
};

// The 15 Kronrod nodes in ascending order, with Kronrod and embedded Gauss
// weights, for rules assembled left to right.
inline const std::array<GkNode, 15>& sorted_gk15() {
    static const std::array<GkNode, 15> nodes = [] {
        std::array<GkNode, 15> a{};
        for (int j = 0; j < 7; ++j) {
            const double gw = (j % 2 == 1) ? quad::gauss7_weights[(j - 1) / 2] : 0.0;
            a[j] = {-quad::gk15_nodes[j], quad::gk15_weights[j], gw};
            a[14 - j] = {quad::gk15_nodes[j], quad::gk15_weights[j], gw};
        }
        a[7] = {0.0, quad::gk15_weights[7], quad::gauss7_weights[3]};
        return a;
    }();
    return nodes;
}

inline double log_cos(double x) { return std::log(std::cos(x)); }
inline double log_sin(double x) { return std::log(std::sin(x)); }

// I_n(tau) / cos^{n-1}(tau), the du/ds integrand, with the power factor kept
// in log space so large n cannot underflow the quotient.
inline double tube_ratio(int n, double tau) {
    if (tau <= 0.0) return 0.0;
    const double in = cos_power_integral_closed(n, tau);
    return std::exp(std::log(in) - double(n - 1) * log_cos(tau));
}

// Weighted J-ratio  int_0^tau (sin(l)/sin(tau))^{n-1} prev(l) dl, the dv/dt
// integrand of hierarchy level k (prev = level k-1).  The substitution
// l = tau - x turns it into a Laplace-type integral whose integrand lives in
// [0, max prev]; no power of sin is ever formed outside log space.  Below
// tau = 1e-4 the removable singularity is handled by the series
// J_n/sin^{n-1} = (tau/n)(1 + (n-1) tau^2 / (3(n+2)) + O(tau^4)).
template <class Prev>
double ball_ratio(int n, double tau, const KernelAccuracy& acc, Prev&& prev) {
    if (tau <= 0.0) return 0.0;
    if (tau < 1e-4) {
        const double corr = 1.0 + double(n - 1) * tau * tau / (3.0 * double(n + 2));
        return tau / double(n) * corr * prev(0.0);
    }
    const double lst = log_sin(tau);
    const double cot = std::cos(tau) / std::sin(tau);
    double cut = tau;
    if (cot > 0.0) cut = std::min(tau, 60.0 / (double(n - 1) * cot));
    auto f = [&](double x) {
        return std::exp(double(n - 1) * (log_sin(tau - x) - lst)) * prev(tau - x);
    };
    return quad::adaptive(f, 0.0, cut, acc);
}

inline std::vector<double> uniform_grid(double upper, int size) {
    std::vector<double> g(size);
    const double h = upper / double(size - 1);
    for (int j = 0; j < size; ++j) g[j] = double(j) * h;
    g.back() = upper;
    return g;
}

// Relative estimate of the error the cubic interpolant of `prev` injects
// into the next nested integral: fourth differences (~ h^4 f'''') averaged
// against the inner power weight, which is where the integral actually
// looks.  The 1/384 constant is the integrated per-panel defect of a cubic.
inline double interp_error_estimate(DomainKind kind, int n,
                                    const std::vector<double>& grid,
                                    const std::vector<double>& prev) {
    const std::size_t g = grid.size();
    const double nm1 = double(n - 1);
    const double ref = (kind == DomainKind::tube) ? 0.0 : log_sin(grid.back());
    auto weight = [&](double x) {
        return (kind == DomainKind::tube) ? std::exp(nm1 * log_cos(x))
                                          : std::exp(nm1 * (log_sin(x) - ref));
    };
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < g; ++j) {
        const double w = (kind == DomainKind::ball && grid[j] == 0.0) ? 0.0 : weight(grid[j]);
        den += prev[j] * w;
        if (j + 4 < g) {
            const double d4 = prev[j] - 4.0 * prev[j + 1] + 6.0 * prev[j + 2] -
                              4.0 * prev[j + 3] + prev[j + 4];
            num += std::abs(d4) * w;
        }
    }
    if (!(den > 0.0)) return 0.0;
    return num / (384.0 * den);
}

// One tube hierarchy level on the grid by cumulative Gauss-Kronrod panels:
// inner weight integral A(tau) = int_0^tau cos^{n-1} prev accumulated left to
// right, outer integrand k exp(log A - (n-1) log cos) summed right to left so
// the boundary value is exactly zero.
template <class Prev>
std::pair<std::vector<double>, double>
tube_level(int n, int k, const std::vector<double>& grid, Prev&& prev) {
    const int G = int(grid.size());
    const auto& nodes = sorted_gk15();
    const double nm1 = double(n - 1);
    auto w = [&](double xi) { return std::exp(nm1 * log_cos(xi)) * prev(xi); };

    std::vector<double> panel(G - 1);
    double err = 0.0;
    double inner = 0.0;
    for (int j = 0; j + 1 < G; ++j) {
        const double a = grid[j], b = grid[j + 1];
        const double mid = 0.5 * (a + b), hal = 0.5 * (b - a);
        double kron = 0.0, gaus = 0.0;
        double arun = inner;
        double xprev = a;
        for (const auto& nd : nodes) {
            const double tq = mid + hal * nd.pos;
            arun += quad::gauss5(w, xprev, tq);
            xprev = tq;
            const double f = double(k) * std::exp(std::log(arun) - nm1 * log_cos(tq));
            kron += nd.wk * f;
            gaus += nd.wg * f;
        }
        panel[j] = kron * hal;
        err += std::abs((kron - gaus) * hal);
        inner += quad::gk15(w, a, b).value;
    }

    std::vector<double> values(G, 0.0);
    for (int j = G - 2; j >= 0; --j) values[j] = values[j + 1] + panel[j];
    return {std::move(values), err};
}

// Ball analogue; the inner power-of-sin integral is evaluated per node by
// the Laplace-form ratio, so no cumulative sum can underflow.
template <class Prev>
std::pair<std::vector<double>, double>
ball_level(int n, int k, const std::vector<double>& grid, const KernelAccuracy& acc,
           Prev&& prev) {
    const int G = int(grid.size());
    const auto& nodes = sorted_gk15();
    KernelAccuracy inner_acc = acc;
    inner_acc.rel_tol = std::max(acc.rel_tol * 0.1, 1e-13);

    std::vector<double> panel(G - 1);
    double err = 0.0;
    for (int j = 0; j + 1 < G; ++j) {
        const double a = grid[j], b = grid[j + 1];
        const double mid = 0.5 * (a + b), hal = 0.5 * (b - a);
        double kron = 0.0, gaus = 0.0;
        for (const auto& nd : nodes) {
            const double tq = mid + hal * nd.pos;
            const double f = double(k) * ball_ratio(n, tq, inner_acc, prev);
            kron += nd.wk * f;
            gaus += nd.wg * f;
        }
        panel[j] = kron * hal;
        err += std::abs((kron - gaus) * hal);
    }

    std::vector<double> values(G, 0.0);
    for (int j = G - 2; j >= 0; --j) values[j] = values[j + 1] + panel[j];
    return {std::move(values), err};
}

// Integrating-factor march of the same level for cross-checking: the ratio
// Q = k A / w obeys Q' = k prev + (n-1) tan(tau) Q on the tube and
// Q' = k prev - (n-1) cot(tau) Q on the ball; V' = Q accumulates the level.
template <class Prev>
std::vector<double> ode_level(DomainKind kind, int n, int k,
                              const std::vector<double>& grid, Prev&& prev) {
    const int G = int(grid.size());
    const double nm1 = double(n - 1);
    const bool tube = kind == DomainKind::tube;

    auto drift = [&](double tau) {
        return tube ? nm1 * std::tan(tau) : -nm1 * std::cos(tau) / std::sin(tau);
    };
    auto rhs_q = [&](double tau, double q) { return double(k) * prev(tau) + drift(tau) * q; };

    std::vector<double> cum(G, 0.0);
    double tau, q, v;
    if (tube) {
        tau = 0.0;
        q = 0.0;
        v = 0.0;
    } else {
        tau = std::min(1e-8, grid[1] * 1e-4);
        q = double(k) * prev(0.0) * tau / double(n);
        v = 0.5 * q * tau;
    }
    for (int j = 1; j < G; ++j) {
        const double target = grid[j];
        while (tau < target) {
            double cap = target - tau;
            if (!tube) {
                const double lam = nm1 * std::cos(tau) / std::sin(tau);
                if (lam > 0.0) cap = std::min(cap, 1.5 / lam);
            } else {
                const double lam = nm1 * std::tan(target);
                if (lam > 1.0) cap = std::min(cap, (target - grid[j - 1]) * 40.0 / lam);
            }
            const double h = std::min(cap, (target - grid[j - 1]) / 16.0);
            const double q1 = rhs_q(tau, q);
            const double q2 = rhs_q(tau + 0.5 * h, q + 0.5 * h * q1);
            const double q3 = rhs_q(tau + 0.5 * h, q + 0.5 * h * q2);
            const double q4 = rhs_q(tau + h, q + h * q3);
            const double v1 = q;
            const double v2 = q + 0.5 * h * q1;
            const double v3 = q + 0.5 * h * q2;
            const double v4 = q + h * q3;
            q += h / 6.0 * (q1 + 2.0 * q2 + 2.0 * q3 + q4);
            v += h / 6.0 * (v1 + 2.0 * v2 + 2.0 * v3 + v4);
            tau += h;
            if (target - tau < 1e-15 * target) tau = target;
        }
        cum[j] = v;
    }
    std::vector<double> values(G);
    for (int j = 0; j < G; ++j) values[j] = std::max(0.0, cum[G - 1] - cum[j]);
    values[G - 1] = 0.0;
    return values;
}

} // namespace detail

// ---------------------------------------------------------------------------
// point evaluations

// u_{delta,n}(s) = int_s^delta I_n(tau) cos^{1-n}(tau) dtau for s in [0, delta].
inline double exit_time_tube(const TubeGeometry& geom, double s,
                             const KernelAccuracy& acc = {}) {
    acc.validate();
    if (!(s >= 0.0) || !(s <= geom.delta))
        throw std::domain_error("exit_time_tube: s must lie in [0, delta]");
    if (s == geom.delta) return 0.0;
    auto f = [&](double tau) { return detail::tube_ratio(geom.n, tau); };
    const double value = quad::adaptive_refined_upper(f, s, geom.delta, acc);
    if (!std::isfinite(value))
        throw accuracy_error("exit_time_tube: value overflowed double range");
    return value;
}

// v_{delta,n}(t) = int_t^rho J_n(tau) sin^{1-n}(tau) dtau for t in [0, rho].
inline double exit_time_ball(const BallGeometry& geom, double t,
                             const KernelAccuracy& acc = {}) {
    acc.validate();
    if (!(t >= 0.0) || !(t <= geom.rho))
        throw std::domain_error("exit_time_ball: t must lie in [0, rho]");
    if (t == geom.rho) return 0.0;
    auto one = [](double) { return 1.0; };
    auto f = [&](double tau) { return detail::ball_ratio(geom.n, tau, acc, one); };
    return quad::adaptive(f, t, geom.rho, acc);
}

// ---------------------------------------------------------------------------
// moment hierarchy

// Levels 1..k_max of the Poisson hierarchy on a shared uniform grid; each
// returned profile carries the previous level for residual checks.
inline std::vector<RadialProfile>
moment_hierarchy(const Domain& dom, int k_max, int grid_size,
                 const KernelAccuracy& acc = {},
                 ProfileMethod method = ProfileMethod::quadrature) {
    acc.validate();
    if (k_max < 1)
        throw std::invalid_argument("moment_hierarchy: k_max must be >= 1");
    if (grid_size < 16)
        throw std::invalid_argument("moment_hierarchy: grid_size must be >= 16");
    if (method == ProfileMethod::closed_form_n2 && (dom.n != 2 || k_max != 1))
        throw std::invalid_argument("moment_hierarchy: closed-form-n2 needs n == 2, k == 1");

    const auto grid = detail::uniform_grid(dom.radius, grid_size);
    const double h = grid[1] - grid[0];

    std::vector<RadialProfile> levels;
    levels.reserve(k_max);
    std::optional<MonotoneCubic> prev_interp;

    for (int k = 1; k <= k_max; ++k) {
        auto prev = [&](double x) { return prev_interp ? (*prev_interp)(x) : 1.0; };

        const double interp_rel =
            (k >= 2) ? detail::interp_error_estimate(dom.kind, dom.n, grid,
                                                     levels.back().values)
                     : 0.0;
        if (interp_rel > acc.rel_tol)
            throw accuracy_error("moment_hierarchy: nested interpolation error "
                                 "estimate exceeds rel_tol at level " + std::to_string(k));

        std::vector<double> values;
        double qerr = 0.0;
        if (method == ProfileMethod::closed_form_n2) {
            values.resize(grid.size());
            if (dom.kind == DomainKind::tube) {
                for (std::size_t j = 0; j < grid.size(); ++j)
                    values[j] = detail::log_cos(grid[j]) - detail::log_cos(dom.radius);
            } else {
                for (std::size_t j = 0; j < grid.size(); ++j)
                    values[j] = 2.0 * (detail::log_cos(grid[j] / 2.0) -
                                       detail::log_cos(dom.radius / 2.0));
            }
            values.back() = 0.0;
        } else if (method == ProfileMethod::ode) {
            values = detail::ode_level(dom.kind, dom.n, k, grid, prev);
        } else if (dom.kind == DomainKind::tube) {
            std::tie(values, qerr) = detail::tube_level(dom.n, k, grid, prev);
        } else {
            std::tie(values, qerr) = detail::ball_level(dom.n, k, grid, acc, prev);
        }
        if (!std::isfinite(values.front()))
            throw accuracy_error("moment_hierarchy: level overflowed double range");

        RadialProfile p;
        p.domain = dom;
        p.k = k;
        p.grid = grid;
        p.values = values;
        if (k >= 2) p.prev_values = levels.back().values;
        p.method = method;
        p.tolerance = qerr + interp_rel * values.front();
        levels.push_back(std::move(p));

        prev_interp.emplace(0.0, h, values);
    }
    return levels;
}

inline RadialProfile moment_tube(const TubeGeometry& geom, int k, int grid_size,
                                 const KernelAccuracy& acc = {},
                                 ProfileMethod method = ProfileMethod::quadrature) {
    auto levels = moment_hierarchy(Domain::tube(geom), k, grid_size, acc, method);
    return std::move(levels.back());
}

inline RadialProfile moment_ball(const BallGeometry& geom, int k, int grid_size,
                                 const KernelAccuracy& acc = {},
                                 ProfileMethod method = ProfileMethod::quadrature) {
    auto levels = moment_hierarchy(Domain::ball(geom), k, grid_size, acc, method);
    return std::move(levels.back());
}

// ---------------------------------------------------------------------------
// finite-difference residual of the Poisson hierarchy equation

// Maximum scaled defect of  u'' - tr S u' + k u_{k-1} = 0  over the interior
// grid by central differences, each point normalized by the largest term in
// the equation there.  The two points nearest each endpoint are excluded;
// for the ball an additional collar near t = 0 is skipped, where the cot
// drift dominates everything else.
inline double pde_residual(const RadialProfile& profile, double ball_collar = 0.02) {
    const auto& x = profile.grid;
    const auto& y = profile.values;
    if (x.size() < 5 || y.size() != x.size())
        throw std::invalid_argument("pde_residual: grid too coarse (need >= 5 points)");
    if (profile.k < 1)
        throw std::invalid_argument("pde_residual: profile level k must be >= 1");
    const bool have_prev = !profile.prev_values.empty();
    if (profile.k >= 2 && !have_prev)
        throw std::invalid_argument("pde_residual: missing previous hierarchy level");
    const bool tube = profile.domain.kind == DomainKind::tube;
    const double nm1 = double(profile.domain.n - 1);

    double worst = 0.0;
    for (std::size_t i = 2; i + 2 < x.size(); ++i) {
        if (!tube && x[i] < ball_collar) continue;
        const double hm = x[i] - x[i - 1];
        const double hp = x[i + 1] - x[i];
        const double denom = hm * hp * (hm + hp);
        const double d1 = (hm * hm * y[i + 1] - hp * hp * y[i - 1] +
                           (hp * hp - hm * hm) * y[i]) / denom;
        const double d2 = 2.0 * (hm * y[i + 1] + hp * y[i - 1] - (hm + hp) * y[i]) / denom;
        const double tr = tube ? nm1 * std::tan(x[i])
                               : -nm1 * std::cos(x[i]) / std::sin(x[i]);
        const double forcing = double(profile.k) * (have_prev ? profile.prev_values[i] : 1.0);
        const double defect = d2 - tr * d1 + forcing;
        double scale = std::max({std::abs(d2), std::abs(tr * d1), std::abs(forcing)});
        if (scale == 0.0) scale = 1.0;
        worst = std::max(worst, std::abs(defect) / scale);
    }
    return worst;
}

} // namespace tubexit
