#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "tubexit/errors.hpp"
#include "tubexit/geometry.hpp"

namespace tubexit {

namespace detail {

// I_n(tau) = integral of cos^{n-1} over [0, tau], tau in [0, pi/2], by the
// two-term reduction
//
//   int cos^m = cos^{m-1}(tau) sin(tau) / m + (m-1)/m * int cos^{m-2}
//
// climbed upward from m in {0, 1}.  Every term is nonnegative, so the climb
// is forward stable; the maintained power cos^{m-1}(tau) underflows to zero
// only once its contribution is far below the accumulated value.
inline double cos_power_integral_closed(int n, double tau) {
    const int m_target = n - 1;
    const double s = std::sin(tau);
    const double c = std::cos(tau);
    if (m_target == 0) return tau;
    int m;
    double value; // C_{m-2} while climbing
    double cpow;  // cos^{m-1}(tau)
    if (m_target % 2 == 0) {
        m = 2;
        value = tau; // C_0
        cpow = c;
    } else {
        m = 3;
        value = s; // C_1
        cpow = c * c;
    }
    const double c2 = c * c;
    for (; m <= m_target; m += 2) {
        value = (cpow * s) / m + (double(m - 1) / m) * value;
        cpow *= c2;
    }
    return value;
}

} // namespace detail

// I_n(tau) = int_0^tau cos^{n-1}(l) dl for tau in [0, pi/2).
inline double cos_power_integral(int n, double tau, const KernelAccuracy& acc = {}) {
    acc.validate();
    if (n < 1)
        throw std::domain_error("cos_power_integral: n must be >= 1");
    if (!(tau >= 0.0) || !(tau < half_pi))
        throw std::domain_error("cos_power_integral: tau must lie in [0, pi/2)");
    const double value = detail::cos_power_integral_closed(n, tau);
    if (!std::isfinite(value) || value < 0.0)
        throw accuracy_error("cos_power_integral: recursion lost all relative precision");
    return value;
}

// J_n(tau) = int_0^tau sin^{n-1}(l) dl for tau in [0, pi/2], evaluated through
// the reflection J_n(tau) = I_n(pi/2) - I_n(pi/2 - tau).
inline double sin_power_integral(int n, double tau, const KernelAccuracy& acc = {}) {
    acc.validate();
    if (n < 1)
        throw std::domain_error("sin_power_integral: n must be >= 1");
    if (!(tau >= 0.0) || !(tau <= half_pi))
        throw std::domain_error("sin_power_integral: tau must lie in [0, pi/2]");
    const double full = detail::cos_power_integral_closed(n, half_pi);
    const double rest = detail::cos_power_integral_closed(n, half_pi - tau);
    double value = full - rest;
    if (value < 0.0) value = 0.0; // rounding at tiny tau
    return value;
}

// Trace of the shape operator of the tubular hypersurface at signed distance
// s from the equator: (n-1) tan(s).  Odd in s; zero on the equator.
inline double mean_curvature_tube(int n, double s) {
    if (n < 2)
        throw std::domain_error("mean_curvature_tube: n must be >= 2");
    if (!(std::abs(s) < half_pi))
        throw std::domain_error("mean_curvature_tube: |s| must be < pi/2");
    return (n - 1) * std::tan(s);
}

// Trace of the shape operator of the geodesic sphere of radius t about the
// pole, with the normal pointing at the pole: -(n-1) cot(t).
inline double mean_curvature_ball(int n, double t) {
    if (n < 2)
        throw std::domain_error("mean_curvature_ball: n must be >= 2");
    if (!(t > 0.0) || !(t < std::numbers::pi))
        throw std::domain_error("mean_curvature_ball: t must lie in (0, pi)");
    return -(n - 1) * std::cos(t) / std::sin(t);
}

// Integrated principal-curvature flow k' = k^2 + 1 of the unit-curvature
// model.  Exact solutions: tan(r) for k(0) = 0 and -cot(r) for the geodesic
// sphere (k -> -inf as r -> 0, started at r = pole_offset).
struct RiccatiPath {
    std::vector<double> r;
    std::vector<double> k;

    std::size_t size() const { return r.size(); }
    double final_r() const { return r.back(); }
    double final_k() const { return k.back(); }
};

// k0 may be -infinity to select the geodesic-sphere initial condition.
inline RiccatiPath solve_riccati(double k0, double r_end, double step,
                                 double pole_offset = 1e-4) {
    if (!(step > 0.0))
        throw std::invalid_argument("solve_riccati: step must be positive");
    if (!(r_end > 0.0))
        throw std::domain_error("solve_riccati: r_end must be positive");
    if (std::isnan(k0))
        throw std::domain_error("solve_riccati: k0 is NaN");

    const bool pole_start = std::isinf(k0) && k0 < 0.0;
    double r0;
    double k;
    if (pole_start) {
        if (!(pole_offset > 0.0) || !(pole_offset < r_end))
            throw std::invalid_argument("solve_riccati: pole_offset must lie in (0, r_end)");
        // -cot(r) stays finite until r = pi
        if (r_end >= std::numbers::pi)
            throw std::domain_error("solve_riccati: solution blows up before r_end");
        r0 = pole_offset;
        k = -std::cos(pole_offset) / std::sin(pole_offset);
    } else {
        const double r_blowup = half_pi - std::atan(k0);
        if (r_end >= r_blowup)
            throw std::domain_error("solve_riccati: solution blows up before r_end");
        r0 = 0.0;
        k = k0;
    }

    RiccatiPath path;
    const auto n_steps = static_cast<std::size_t>(std::ceil((r_end - r0) / step - 1e-12));
    path.r.reserve(n_steps + 1);
    path.k.reserve(n_steps + 1);
    path.r.push_back(r0);
    path.k.push_back(k);

    auto f = [](double y) { return y * y + 1.0; };
    double r = r0;
    for (std::size_t i = 0; i < n_steps; ++i) {
        const double h = std::min(step, r_end - r);
        const double k1 = f(k);
        const double k2 = f(k + 0.5 * h * k1);
        const double k3 = f(k + 0.5 * h * k2);
        const double k4 = f(k + h * k3);
        k += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        r += h;
        if (!std::isfinite(k) || std::abs(k) > 1e12)
            throw std::domain_error("solve_riccati: solution blew up during integration");
        path.r.push_back(r);
        path.k.push_back(k);
    }
    return path;
}

} // namespace tubexit
