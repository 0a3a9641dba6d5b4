#pragma once

#include <numbers>
#include <stdexcept>

namespace tubexit {

inline constexpr double half_pi = std::numbers::pi / 2.0;

// Accuracy budget for the quadrature-backed kernels.  The defaults leave
// headroom above the 1e-8 tolerances used by the verification suites.
struct KernelAccuracy {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_subdivisions = 60;

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
            throw std::invalid_argument("KernelAccuracy: tolerances must be positive");
        if (max_subdivisions < 1)
            throw std::invalid_argument("KernelAccuracy: max_subdivisions must be >= 1");
    }
};

struct BallGeometry;

// Tube of half-width delta (radians) around the equator S^{n-1} of S^n.
struct TubeGeometry {
    int n;
    double delta;

    TubeGeometry(int n_, double delta_) : n(n_), delta(delta_) {
        if (n < 2)
            throw std::invalid_argument("TubeGeometry: n must be >= 2");
        if (!(delta > 0.0) || !(delta < half_pi))
            throw std::invalid_argument("TubeGeometry: delta must lie in (0, pi/2)");
    }

    // Geodesic ball complementary to this tube (radius pi/2 - delta).
    BallGeometry complement() const;
};

// Geodesic ball of radius rho (radians) about a pole of S^n.
struct BallGeometry {
    int n;
    double rho;

    BallGeometry(int n_, double rho_) : n(n_), rho(rho_) {
        if (n < 2)
            throw std::invalid_argument("BallGeometry: n must be >= 2");
        if (!(rho > 0.0) || !(rho < half_pi))
            throw std::invalid_argument("BallGeometry: rho must lie in (0, pi/2)");
    }

    TubeGeometry complement() const { return TubeGeometry(n, half_pi - rho); }
};

inline BallGeometry TubeGeometry::complement() const {
    return BallGeometry(n, half_pi - delta);
}

} // namespace tubexit
