#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "tubexit/exit_solver.hpp"
#include "tubexit/montecarlo.hpp"
#include "tubexit/serialize.hpp"

using namespace tubexit;
using Catch::Approx;

namespace {
constexpr double pi = std::numbers::pi;

SimulationConfig tube_cfg(int n, double delta, double start) {
    SimulationConfig cfg;
    cfg.domain = Domain::tube(TubeGeometry(n, delta));
    cfg.start = start;
    return cfg;
}

SimulationConfig ball_cfg(int n, double rho, double start) {
    SimulationConfig cfg;
    cfg.domain = Domain::ball(BallGeometry(n, rho));
    cfg.start = start;
    return cfg;
}
} // namespace

TEST_CASE("probit is the inverse of the normal CDF") {
    auto normal_cdf = [](double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); };
    for (double p = 0.0005; p < 1.0; p += 0.0061) {
        const double z = rng::probit(p);
        CHECK(normal_cdf(z) == Approx(p).epsilon(3e-9).margin(3e-9));
    }
    CHECK(rng::probit(0.5) == 0.0);
    CHECK(rng::probit(0.975) == Approx(1.959963984540054).epsilon(1e-8));
}

TEST_CASE("normal sampler moments from the path generator") {
    rng::Xoshiro256pp gen = rng::Xoshiro256pp::seeded(12345);
    const int N = 2'000'000;
    double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    int inside = 0;
    for (int i = 0; i < N; ++i) {
        const double z = rng::probit(rng::to_unit_open(gen.next()));
        s1 += z;
        s2 += z * z;
        s3 += z * z * z;
        s4 += z * z * z * z;
        if (std::abs(z) < 1.959963984540054) ++inside;
    }
    CHECK(s1 / N == Approx(0.0).margin(4.0 / std::sqrt(double(N))));
    CHECK(s2 / N == Approx(1.0).epsilon(0.004));
    CHECK(s3 / N == Approx(0.0).margin(16.0 / std::sqrt(double(N))));
    CHECK(s4 / N == Approx(3.0).epsilon(0.02));
    CHECK(double(inside) / N == Approx(0.95).margin(0.002));
}

TEST_CASE("simulation is bitwise deterministic and stream-count invariant") {
    auto cfg = tube_cfg(3, 0.7, 0.1);
    cfg.paths = 4000;
    cfg.dt = 1e-3;
    cfg.seed = 99;

    cfg.streams = 1;
    const auto a = simulate_exit_tube(cfg, 3);
    const auto b = simulate_exit_tube(cfg, 3);
    cfg.streams = 8;
    const auto c = simulate_exit_tube(cfg, 3);

    CHECK(to_json(a).dump() == to_json(b).dump());
    // identical sample, stream split only changes scheduling
    CHECK(a.mean == c.mean);
    CHECK(a.variance == c.variance);
    CHECK(a.raw_moments == c.raw_moments);
    CHECK(a.std_errors == c.std_errors);
    CHECK(c.streams == 8);

    cfg.seed = 100;
    const auto d = simulate_exit_tube(cfg, 3);
    CHECK(d.mean != a.mean);
}

TEST_CASE("tube simulation agrees with the n = 2 closed form") {
    auto cfg = tube_cfg(2, pi / 4, 0.0);
    cfg.paths = 30000;
    cfg.dt = 1e-4;
    cfg.seed = 2024;
    const auto st = simulate_exit_tube(cfg, 2);
    CHECK(st.count == cfg.paths);
    CHECK(st.capped_paths == 0);
    CHECK(st.raw_moments[0] == st.mean);
    // 3 SE plus an O(dt)-scale allowance for the Euler bias
    const double target = 0.34657359027997264;
    CHECK(std::abs(st.mean - target) < 3.0 * st.std_errors[0] + 50.0 * cfg.dt);
    CHECK(st.variance > 0.0);
    const double m2_target = 0.203785472815;
    CHECK(std::abs(st.raw_moments[1] - m2_target) < 3.0 * st.std_errors[1] + 60.0 * cfg.dt);
}

TEST_CASE("ball simulation agrees with the n = 2 closed form") {
    auto cfg = ball_cfg(2, pi / 4, 0.0);
    cfg.paths = 30000;
    cfg.dt = 1e-4;
    cfg.seed = 7;
    const auto st = simulate_exit_ball(cfg, 1);
    const double target = 0.15834718382037494;
    CHECK(std::abs(st.mean - target) < 3.0 * st.std_errors[0] + 30.0 * cfg.dt);
}

TEST_CASE("boundary-adjacent start exits almost immediately") {
    auto cfg = tube_cfg(2, pi / 4, pi / 4 - 1e-12);
    cfg.paths = 2000;
    cfg.dt = 1e-5;
    const auto st = simulate_exit_tube(cfg, 1);
    CHECK(st.mean < 10.0 * cfg.dt);
    CHECK(st.mean > 0.0);
}

TEST_CASE("tube start symmetry within combined errors") {
    auto cfg = tube_cfg(4, 0.9, 0.35);
    cfg.paths = 20000;
    cfg.dt = 1e-4;
    cfg.seed = 31;
    const auto plus = simulate_exit_tube(cfg, 1);
    cfg.start = -0.35;
    cfg.seed = 32;
    const auto minus = simulate_exit_tube(cfg, 1);
    const double se = std::hypot(plus.std_errors[0], minus.std_errors[0]);
    CHECK(std::abs(plus.mean - minus.mean) < 3.0 * se);
}

TEST_CASE("configuration validation") {
    CHECK_THROWS_AS(simulate_exit_ball(ball_cfg(2, 0.5, 0.5), 1), std::invalid_argument);
    CHECK_THROWS_AS(simulate_exit_tube(tube_cfg(2, 0.5, 0.5), 1), std::invalid_argument);
    CHECK_THROWS_AS(simulate_exit_tube(tube_cfg(2, 0.5, -0.5), 1), std::invalid_argument);
    CHECK_NOTHROW(simulate_exit_tube(tube_cfg(2, 0.5, -0.49), 1));
    auto cfg = tube_cfg(2, 0.5, 0.0);
    cfg.paths = 0;
    CHECK_THROWS_AS(simulate_exit_tube(cfg, 1), std::invalid_argument);
    cfg.paths = 10;
    cfg.dt = 0.0;
    CHECK_THROWS_AS(simulate_exit_tube(cfg, 1), std::invalid_argument);
    cfg.dt = 1e-4;
    CHECK_THROWS_AS(simulate_exit_tube(cfg, 0), std::invalid_argument);
    CHECK_THROWS_AS(simulate_exit_ball(cfg, 1), std::invalid_argument); // kind mismatch
}

TEST_CASE("step cap sets the nonconvergence flag") {
    auto cfg = tube_cfg(2, 1.4, 0.0);
    cfg.paths = 50;
    cfg.dt = 1e-6;
    cfg.max_steps = 100;
    const auto st = simulate_exit_tube(cfg, 1);
    CHECK(st.capped_paths > 0);
    CHECK(st.nonconverged());
}

TEST_CASE("antithetic pairing keeps the estimator unbiased") {
    auto cfg = tube_cfg(2, pi / 4, 0.0);
    cfg.paths = 20000;
    cfg.dt = 1e-4;
    cfg.antithetic = true;
    const auto st = simulate_exit_tube(cfg, 1);
    CHECK(std::abs(st.mean - 0.34657359027997264) < 3.0 * st.std_errors[0] + 50.0 * cfg.dt);
}

TEST_CASE("half-generator convention doubles the mean exit time") {
    auto cfg = tube_cfg(2, pi / 4, 0.0);
    cfg.paths = 8000;
    cfg.dt = 5e-5;
    const auto full = simulate_exit_tube(cfg, 1);
    cfg.half_generator = true;
    cfg.dt = 1e-4; // halved generator doubles the time scale
    const auto half = simulate_exit_tube(cfg, 1);
    CHECK(half.mean / full.mean == Approx(2.0).epsilon(0.05));
}

TEST_CASE("convergence sweep shrinks the bias and chains sub-seeds") {
    auto cfg = tube_cfg(2, pi / 4, 0.0);
    cfg.paths = 4000;
    cfg.seed = 11;
    const auto single = convergence_sweep(cfg, {1e-4});
    REQUIRE(single.size() == 1);
    cfg.dt = 1e-4;
    const auto direct = simulate_exit_tube(cfg, 1);
    CHECK(single[0].mean == direct.mean); // first entry reuses cfg.seed verbatim

    cfg.paths = 20000;
    const auto sweep = convergence_sweep(cfg, {2e-3, 2e-4});
    REQUIRE(sweep.size() == 2);
    const double target = 0.34657359027997264;
    const double err0 = std::abs(sweep[0].mean - target);
    const double err1 = std::abs(sweep[1].mean - target);
    // the coarse-step bias dwarfs both noise levels; refinement must shrink it
    CHECK(err1 < err0 + 3.0 * std::hypot(sweep[0].std_error, sweep[1].std_error));

    CHECK_THROWS_AS(convergence_sweep(cfg, {}), std::invalid_argument);
    CHECK_THROWS_AS(convergence_sweep(cfg, {1e-3, 1e-3}), std::invalid_argument);
}
