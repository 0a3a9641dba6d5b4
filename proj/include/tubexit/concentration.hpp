#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "tubexit/bounds.hpp"
#include "tubexit/exit_solver.hpp"
#include "tubexit/geometry.hpp"
#include "tubexit/kernels.hpp"

namespace tubexit {

// log vol(S^m) = log 2 + ((m+1)/2) log pi - lgamma((m+1)/2); the direct
// Gamma form overflows past m ~ 340.
inline double log_sphere_volume(int m) {
    if (m < 0)
        throw std::invalid_argument("log_sphere_volume: m must be >= 0");
    const double half = 0.5 * double(m + 1);
    return std::numbers::ln2 + half * std::log(std::numbers::pi) - std::lgamma(half);
}

inline double sphere_volume(int m) { return std::exp(log_sphere_volume(m)); }

// vol(T_delta(S^{n-1})) / vol(S^n) = I_n(delta) / I_n(pi/2) in the model.
// The mathematical value lies strictly inside (0, 1); once the complement's
// mass drops below one ulp the quotient saturates, so it is clamped to the
// largest double below 1.
inline double tube_volume_fraction(const TubeGeometry& geom, const KernelAccuracy& acc = {}) {
    acc.validate();
    const double frac = detail::cos_power_integral_closed(geom.n, geom.delta) /
                        detail::cos_power_integral_closed(geom.n, half_pi);
    return std::min(frac, 1.0 - std::numeric_limits<double>::epsilon() / 2.0);
}

// Levy bound 1 - 2 e^{-(n-1) delta^2 / 2}; negative (vacuous) values are
// returned raw, the caller decides policy.  Like the volume fraction, the
// bound is strictly below 1 and saturates to the largest double below 1
// once the exponential drops under one ulp.
inline double levy_lower_bound(int n, double delta) {
    if (n < 2)
        throw std::invalid_argument("levy_lower_bound: n must be >= 2");
    if (!(delta > 0.0) || !(delta < half_pi))
        throw std::invalid_argument("levy_lower_bound: delta must lie in (0, pi/2)");
    const double value = 1.0 - 2.0 * std::exp(-0.5 * double(n - 1) * delta * delta);
    return std::min(value, 1.0 - std::numeric_limits<double>::epsilon() / 2.0);
}

// vol(S^{n-1}) / (1 - 2 e^{-(n-1) delta^2/2}), undefined while the Levy
// bound is vacuous.
struct VolumeCap {
    double value = std::numeric_limits<double>::quiet_NaN();
    double log_value = std::numeric_limits<double>::quiet_NaN();
    bool defined = false;
};

inline VolumeCap rigidity_volume_cap(int n, double delta) {
    const double levy = levy_lower_bound(n, delta);
    VolumeCap cap;
    if (!(levy > 0.0)) return cap;
    cap.defined = true;
    cap.log_value = log_sphere_volume(n - 1) - std::log(levy);
    cap.value = std::exp(cap.log_value);
    return cap;
}

// Grove-Shiohama trigger of Corollary 4: true iff sigma_volume exceeds half
// the rigidity cap; false whenever the cap is undefined.
inline bool sphere_theorem_threshold(int n, double delta, double sigma_volume) {
    if (!(sigma_volume > 0.0))
        throw std::invalid_argument("sphere_theorem_threshold: sigma_volume must be > 0");
    const VolumeCap cap = rigidity_volume_cap(n, delta);
    if (!cap.defined) return false;
    return std::log(sigma_volume) > cap.log_value - std::numbers::ln2;
}

// One (n, delta) record of the concentration diagnostics.
struct ScanRow {
    int n = 0;
    double delta = 0.0;
    double F_mid = 0.0;            // F_{delta,n}(delta/2)
    double G = 0.0;                // upper_bound_G
    double u_center = 0.0;         // exit_time_tube at s = 0
    double v_center = 0.0;         // exit_time_ball at t = 0
    double tube_frac = 0.0;        // vol fraction of the tube
    double levy_bound = 0.0;       // raw Levy bound
    double volume_cap = std::numeric_limits<double>::quiet_NaN();
    bool cap_defined = false;
};

inline ScanRow scan_row(int n, double delta, const KernelAccuracy& acc = {}) {
    const TubeGeometry tube(n, delta);
    const BallGeometry ball = tube.complement();
    ScanRow row;
    row.n = n;
    row.delta = delta;
    row.F_mid = lower_bound_F(tube, 1, 0.5 * delta);
    row.G = upper_bound_G(tube);
    row.u_center = exit_time_tube(tube, 0.0, acc);
    row.v_center = exit_time_ball(ball, 0.0, acc);
    row.tube_frac = tube_volume_fraction(tube, acc);
    row.levy_bound = levy_lower_bound(n, delta);
    const VolumeCap cap = rigidity_volume_cap(n, delta);
    row.volume_cap = cap.value;
    row.cap_defined = cap.defined;
    return row;
}

// Full (n, delta) table, sorted by (n, delta), deterministic.
inline std::vector<ScanRow> scan(std::vector<int> n_list, std::vector<double> delta_list,
                                 const KernelAccuracy& acc = {}) {
    if (n_list.empty() || delta_list.empty())
        throw std::invalid_argument("scan: n_list and delta_list must be nonempty");
    std::sort(n_list.begin(), n_list.end());
    std::sort(delta_list.begin(), delta_list.end());
    std::vector<ScanRow> rows;
    rows.reserve(n_list.size() * delta_list.size());
    for (int n : n_list)
        for (double d : delta_list) rows.push_back(scan_row(n, d, acc));
    return rows;
}

} // namespace tubexit
