#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "tubexit/errors.hpp"
#include "tubexit/geometry.hpp"

namespace tubexit {
namespace quad {

// Gauss-Kronrod 7-15 pair (QUADPACK dqk15 constants).
inline constexpr std::array<double, 8> gk15_nodes = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};

inline constexpr std::array<double, 8> gk15_weights = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};

inline constexpr std::array<double, 4> gauss7_weights = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct PanelEstimate {
    double value = 0.0;
    double error = 0.0;
};

// One Gauss-Kronrod 15 panel with embedded 7-point error estimate.
template <class F>
PanelEstimate gk15(F&& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double hal = 0.5 * (b - a);
    double kronrod = gk15_weights[7] * f(mid);
    double gauss = gauss7_weights[3] * f(mid);
    for (int i = 0; i < 7; ++i) {
        const double off = hal * gk15_nodes[i];
        const double sum = f(mid - off) + f(mid + off);
        kronrod += gk15_weights[i] * sum;
        if (i % 2 == 1) gauss += gauss7_weights[i / 2] * sum;
    }
    PanelEstimate out;
    out.value = kronrod * hal;
    out.error = std::abs((kronrod - gauss) * hal);
    return out;
}

// Fixed 5-point Gauss-Legendre rule; used for short cumulative hops where
// no error estimate is needed.
template <class F>
double gauss5(F&& f, double a, double b) {
    constexpr double x1 = 0.538469310105683091036314420700440;
    constexpr double x2 = 0.906179845938663992797626878299393;
    constexpr double w0 = 0.568888888888888888888888888888889;
    constexpr double w1 = 0.478628670499366468041291514835638;
    constexpr double w2 = 0.236926885056189087514264040719917;
    const double mid = 0.5 * (a + b);
    const double hal = 0.5 * (b - a);
    double s = w0 * f(mid);
    s += w1 * (f(mid - hal * x1) + f(mid + hal * x1));
    s += w2 * (f(mid - hal * x2) + f(mid + hal * x2));
    return s * hal;
}

// Adaptive bisection driven by the embedded-pair estimate.  Throws
// accuracy_error once max_subdivisions levels of refinement fail to meet
// the budget on some panel.
template <class F>
double adaptive(F&& f, double a, double b, const KernelAccuracy& acc,
                double* achieved_error = nullptr) {
    if (a == b) {
        if (achieved_error) *achieved_error = 0.0;
        return 0.0;
    }
    struct Panel {
        double a, b;
        PanelEstimate est;
        int depth;
    };
    std::vector<Panel> stack;
    stack.push_back({a, b, gk15(f, a, b), 0});
    double total = 0.0;
    double err = 0.0;
    const double span = std::abs(b - a);
    // first-pass magnitude estimate for the relative part of the budget
    double scale = std::abs(stack.front().est.value);
    while (!stack.empty()) {
        Panel p = stack.back();
        stack.pop_back();
        const double width = std::abs(p.b - p.a);
        const double budget =
            std::max(acc.abs_tol, acc.rel_tol * scale) * (width / span);
        if (p.est.error <= budget || width <= std::abs(p.a) * 1e-15) {
            total += p.est.value;
            err += p.est.error;
            scale = std::max(scale, std::abs(total));
            continue;
        }
        if (p.depth >= acc.max_subdivisions)
            throw accuracy_error("adaptive quadrature: max_subdivisions exceeded");
        const double mid = 0.5 * (p.a + p.b);
        stack.push_back({p.a, mid, gk15(f, p.a, mid), p.depth + 1});
        stack.push_back({mid, p.b, gk15(f, mid, p.b), p.depth + 1});
    }
    if (achieved_error) *achieved_error = err;
    return total;
}

// Adaptive integration over [a, b] with panels pre-split geometrically
// toward b, for integrands that grow like a power of 1/(b - x) there.
template <class F>
double adaptive_refined_upper(F&& f, double a, double b, const KernelAccuracy& acc,
                              double* achieved_error = nullptr) {
    if (achieved_error) *achieved_error = 0.0;
    if (!(b > a)) return 0.0;
    double total = 0.0;
    double err = 0.0;
    double width = b - a;
    double right = b;
    while (width > 32.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(b))) {
        const double left = right - 0.5 * width;
        double e = 0.0;
        total += adaptive(f, left, right, acc, &e);
        err += e;
        right = left;
        width = right - a;
        if (width < 1e-14 * (b - a)) break;
    }
    if (right > a) {
        double e = 0.0;
        total += adaptive(f, a, right, acc, &e);
        err += e;
    }
    if (achieved_error) *achieved_error = err;
    return total;
}

} // namespace quad
} // namespace tubexit
