#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "support/oracles.hpp"
#include "tubexit/kernels.hpp"

using namespace tubexit;
using Catch::Approx;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("cos_power_integral matches analytic antiderivatives") {
    CHECK(cos_power_integral(1, 0.7) == Approx(0.7).epsilon(1e-14));
    CHECK(cos_power_integral(2, pi / 4) == Approx(std::sin(pi / 4)).epsilon(1e-13));
    // int cos^2 = l/2 + sin(2l)/4
    CHECK(cos_power_integral(3, pi / 4) == Approx(pi / 8 + 0.25).epsilon(1e-13));
}

TEST_CASE("cos_power_integral agrees with brute-force quadrature for n <= 12") {
    for (int n = 1; n <= 12; ++n) {
        for (double tau : {0.05, 0.3, 0.7, 1.1, 1.5}) {
            const double ref =
                oracle::simpson([n](double l) { return std::pow(std::cos(l), n - 1); }, 0.0, tau);
            CHECK(cos_power_integral(n, tau) == Approx(ref).epsilon(1e-10));
        }
    }
}

TEST_CASE("cos_power_integral is monotone in tau and in n") {
    for (int n : {2, 3, 7, 20, 101}) {
        double last = 0.0;
        for (double tau = 0.1; tau < 1.55; tau += 0.1) {
            const double v = cos_power_integral(n, tau);
            // strict once the increment is resolvable in double precision
            const double increment = std::exp((n - 1) * std::log(std::cos(tau))) * 0.05;
            if (increment > 1e-12 * v)
                CHECK(v > last);
            else
                CHECK(v >= last - 8e-16 * v);
            last = v;
        }
    }
    for (double tau : {0.2, 0.8, 1.4}) {
        double last = cos_power_integral(2, tau);
        for (int n : {3, 5, 9, 33, 150}) {
            const double v = cos_power_integral(n, tau);
            CHECK(v < last);
            last = v;
        }
    }
}

TEST_CASE("cos_power_integral stays positive at n = 10000 without underflow") {
    const double v = cos_power_integral(10000, 0.1);
    CHECK(std::isfinite(v));
    CHECK(v > 0.0);
    // strictly above the bare power factor near the upper limit
    CHECK(v > std::exp(9999.0 * std::log(std::cos(0.1))));
}

TEST_CASE("cos_power_integral at pi/2 matches the Wallis closed form") {
    for (int n : {2, 3, 10, 101, 1000, 2000}) {
        const double wallis = std::exp(0.5 * std::log(pi) - std::numbers::ln2 +
                                       std::lgamma(0.5 * n) - std::lgamma(0.5 * (n + 1)));
        CHECK(detail::cos_power_integral_closed(n, half_pi) == Approx(wallis).epsilon(1e-12));
    }
}

TEST_CASE("cos_power_integral rejects bad arguments") {
    CHECK_THROWS_AS(cos_power_integral(2, -0.1), std::domain_error);
    CHECK_THROWS_AS(cos_power_integral(2, half_pi), std::domain_error);
    CHECK_THROWS_AS(cos_power_integral(0, 0.3), std::domain_error);
    KernelAccuracy bad;
    bad.rel_tol = -1.0;
    CHECK_THROWS_AS(cos_power_integral(2, 0.3, bad), std::invalid_argument);
}

TEST_CASE("sin_power_integral matches analytic antiderivatives") {
    CHECK(sin_power_integral(1, 0.4) == Approx(0.4).epsilon(1e-14));
    CHECK(sin_power_integral(2, pi / 3) == Approx(0.5).epsilon(1e-13));
    // int sin^2 over [0, pi/2] = pi/4
    CHECK(sin_power_integral(3, half_pi) == Approx(pi / 4).epsilon(1e-13));
    CHECK_THROWS_AS(sin_power_integral(2, -0.1), std::domain_error);
    CHECK_THROWS_AS(sin_power_integral(2, half_pi + 0.1), std::domain_error);
}

TEST_CASE("reflection identity J_n(tau) + I_n(pi/2 - tau) = I_n(pi/2)") {
    for (int n : {1, 2, 5, 18, 60}) {
        const double full = detail::cos_power_integral_closed(n, half_pi);
        for (double tau : {0.05, 0.3, 0.7, 1.1, 1.45, half_pi}) {
            const double lhs =
                sin_power_integral(n, tau) + cos_power_integral(n, half_pi - tau);
            CHECK(lhs == Approx(full).epsilon(4e-10).margin(4e-14));
        }
    }
}

TEST_CASE("mean curvature of tubular hypersurfaces") {
    CHECK(mean_curvature_tube(5, 0.0) == 0.0);
    CHECK(mean_curvature_tube(2, pi / 4) == Approx(1.0).epsilon(1e-14));
    CHECK(mean_curvature_tube(11, 0.3) == Approx(3.0933624960962325).epsilon(1e-13));
    // odd in s
    for (double s : {0.1, 0.6, 1.2})
        CHECK(mean_curvature_tube(7, -s) == Approx(-mean_curvature_tube(7, s)).epsilon(1e-15));
    CHECK_THROWS_AS(mean_curvature_tube(3, half_pi), std::domain_error);

    CHECK(mean_curvature_ball(2, half_pi) == Approx(0.0).margin(1e-15));
    CHECK(mean_curvature_ball(2, pi / 4) == Approx(-1.0).epsilon(1e-14));
    CHECK(mean_curvature_ball(4, 0.1) == Approx(-29.899933269777712).epsilon(1e-12));
    CHECK(mean_curvature_ball(4, 0.05) < -59.0); // blows down toward the pole
    CHECK_THROWS_AS(mean_curvature_ball(2, 0.0), std::domain_error);
    CHECK_THROWS_AS(mean_curvature_ball(2, pi), std::domain_error);
}

TEST_CASE("Riccati flow reproduces tan from the equator start") {
    const auto path = solve_riccati(0.0, pi / 4, 1e-5);
    CHECK(path.final_r() == Approx(pi / 4).margin(1e-12));
    CHECK(std::abs(path.final_k() - std::tan(pi / 4)) < 1e-6);
    // max deviation along the whole path
    double worst = 0.0;
    for (std::size_t i = 0; i < path.size(); ++i)
        worst = std::max(worst, std::abs(path.k[i] - std::tan(path.r[i])));
    CHECK(worst < 1e-6);
    // short horizon keeps k near its initial value
    const auto tiny = solve_riccati(0.0, 1e-6, 1e-7);
    CHECK(std::abs(tiny.final_k()) < 2e-6);
}

TEST_CASE("Riccati flow reproduces -cot from the pole start") {
    const double neg_inf = -std::numeric_limits<double>::infinity();
    const auto path = solve_riccati(neg_inf, pi / 4, 1e-5, 1e-4);
    CHECK(std::abs(path.final_k() - (-1.0)) < 1e-4);
    CHECK(path.r.front() == Approx(1e-4));
    CHECK(path.k.front() == Approx(-1.0 / std::tan(1e-4)).epsilon(1e-12));
}

TEST_CASE("Riccati blow-up and step validation") {
    CHECK_THROWS_AS(solve_riccati(0.0, half_pi, 1e-4), std::domain_error);
    CHECK_THROWS_AS(solve_riccati(1.0, pi / 4, 1e-4), std::domain_error); // blows at pi/4
    CHECK_NOTHROW(solve_riccati(1.0, pi / 4 - 1e-3, 1e-5));
    CHECK_THROWS_AS(solve_riccati(0.0, pi / 4, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(solve_riccati(0.0, -1.0, 1e-4), std::domain_error);
}
