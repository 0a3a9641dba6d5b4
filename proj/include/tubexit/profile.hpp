#pragma once

#include <string>
#include <vector>

#include "tubexit/geometry.hpp"

namespace tubexit {

enum class DomainKind { tube, ball };

inline const char* to_string(DomainKind k) {
    return k == DomainKind::tube ? "tube" : "ball";
}

// Radial domain shared by profiles and simulation configs: the tube keeps a
// signed coordinate in (-delta, delta), the ball an unsigned one in [0, rho).
struct Domain {
    DomainKind kind = DomainKind::tube;
    int n = 2;
    double radius = 0.1; // delta for a tube, rho for a ball

    static Domain tube(const TubeGeometry& g) { return {DomainKind::tube, g.n, g.delta}; }
    static Domain ball(const BallGeometry& g) { return {DomainKind::ball, g.n, g.rho}; }

    TubeGeometry as_tube() const { return TubeGeometry(n, radius); }
    BallGeometry as_ball() const { return BallGeometry(n, radius); }

    // delta of the tube identifying this domain (complementary for a ball)
    double delta() const { return kind == DomainKind::tube ? radius : half_pi - radius; }
};

enum class ProfileMethod { quadrature, ode, closed_form_n2 };

inline const char* to_string(ProfileMethod m) {
    switch (m) {
        case ProfileMethod::quadrature: return "quadrature";
        case ProfileMethod::ode: return "ode";
        case ProfileMethod::closed_form_n2: return "closed-form-n2";
    }
    return "?";
}

// One level of the exit-moment hierarchy sampled on a radial grid.
// prev_values holds level k-1 on the same grid (empty means the constant 1,
// i.e. k == 1); the PDE residual check needs it.
struct RadialProfile {
    Domain domain;
    int k = 1;
    std::vector<double> grid;
    std::vector<double> values;
    std::vector<double> prev_values;
    ProfileMethod method = ProfileMethod::quadrature;
    double tolerance = 0.0; // achieved-accuracy estimate

    double boundary() const { return domain.radius; }
    double value_at_center() const { return values.empty() ? 0.0 : values.front(); }
};

enum class BoundKind { lower_F, upper_G, upper_factorial };

inline const char* to_string(BoundKind b) {
    switch (b) {
        case BoundKind::lower_F: return "lower-F";
        case BoundKind::upper_G: return "upper-G";
        case BoundKind::upper_factorial: return "upper-factorial";
    }
    return "?";
}

// A Theorem-1 / moment-hierarchy bound sampled on a radial grid.
struct BoundProfile {
    Domain domain;
    int k = 1;
    BoundKind kind = BoundKind::lower_F;
    std::vector<double> grid;
    std::vector<double> values;
};

} // namespace tubexit
