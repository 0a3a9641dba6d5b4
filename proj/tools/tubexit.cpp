// tubexit: mean exit times, exit-moment hierarchies, concentration bounds and
// first-passage Monte Carlo on equatorial tubes and geodesic balls of S^n.
//
// All angles are radians.  Every report starts with a "# cmd:" comment (or a
// "config" field in JSON mode) carrying the full effective configuration, so
// any run can be reproduced byte for byte.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tubexit/tubexit.hpp"

namespace {

using namespace tubexit;

int parse_exit_code = 2;
int accuracy_exit_code = 3;
int nonconvergence_exit_code = 4;

double env_double(const char* name, double fallback) {
    const char* v = std::getenv(name);
    if (!v || !*v) return fallback;
    try {
        return std::stod(v);
    } catch (...) {
        throw CLI::ValidationError(std::string(name) + ": not a number: " + v);
    }
}

int env_int(const char* name, int fallback) {
    const char* v = std::getenv(name);
    if (!v || !*v) return fallback;
    try {
        return std::stoi(v);
    } catch (...) {
        throw CLI::ValidationError(std::string(name) + ": not an integer: " + v);
    }
}

struct CommonOpts {
    double rel_tol = env_double("TUBEXIT_REL_TOL", 1e-10);
    double abs_tol = env_double("TUBEXIT_ABS_TOL", 1e-14);
    int max_subdivisions = env_int("TUBEXIT_MAX_SUBDIV", 60);
    bool json = false;
    std::string output;

    KernelAccuracy accuracy() const { return {rel_tol, abs_tol, max_subdivisions}; }

    void attach(CLI::App* cmd) {
        cmd->add_option("--rel-tol", rel_tol,
                        "relative tolerance of the kernels (env TUBEXIT_REL_TOL)")
            ->capture_default_str();
        cmd->add_option("--abs-tol", abs_tol,
                        "absolute tolerance of the kernels (env TUBEXIT_ABS_TOL)")
            ->capture_default_str();
        cmd->add_option("--max-subdivisions", max_subdivisions,
                        "adaptive refinement cap (env TUBEXIT_MAX_SUBDIV)")
            ->capture_default_str();
        cmd->add_flag("--json", json, "emit JSON instead of CSV");
        cmd->add_option("-o,--output", output, "output file (default: standard output)");
    }

    std::string echo() const {
        std::string s = " --rel-tol " + format_g17(rel_tol) + " --abs-tol " +
                        format_g17(abs_tol) + " --max-subdivisions " +
                        std::to_string(max_subdivisions);
        if (json) s += " --json";
        return s;
    }
};

// Geometry flags: --delta and --rho are mutually exclusive; whichever is
// given, the other is its complement rho = pi/2 - delta.
struct GeometryOpts {
    std::string kind = "tube";
    int n = 2;
    std::optional<double> delta;
    std::optional<double> rho;

    void attach(CLI::App* cmd, bool with_kind = true) {
        if (with_kind)
            cmd->add_option("--kind", kind, "domain kind: tube or ball")
                ->check(CLI::IsMember({"tube", "ball"}))
                ->capture_default_str();
        cmd->add_option("--n", n, "dimension of the ambient sphere (n >= 2)")->required();
        auto* d = cmd->add_option("--delta", delta, "tube half-width, radians, in (0, pi/2)");
        auto* r = cmd->add_option("--rho", rho, "ball radius, radians, in (0, pi/2)");
        d->excludes(r);
        r->excludes(d);
    }

    double delta_value() const {
        if (delta) return *delta;
        if (rho) return half_pi - *rho;
        throw CLI::ValidationError("one of --delta or --rho is required");
    }

    Domain domain() const {
        const double d = delta_value();
        if (kind == "tube") return Domain::tube(TubeGeometry(n, d));
        return Domain::ball(BallGeometry(n, half_pi - d));
    }

    TubeGeometry tube() const { return TubeGeometry(n, delta_value()); }
    BallGeometry ball() const { return BallGeometry(n, half_pi - delta_value()); }

    std::string echo(bool with_kind = true) const {
        std::string s;
        if (with_kind) s += " --kind " + kind;
        s += " --n " + std::to_string(n);
        if (rho && !delta)
            s += " --rho " + format_g17(*rho);
        else
            s += " --delta " + format_g17(delta_value());
        return s;
    }
};

void emit(const CommonOpts& common, const std::string& text) {
    if (common.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(common.output, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file: " + common.output);
    out << text;
}

std::string csv_report(const std::string& echo_cmd, const std::string& body) {
    return "# cmd: tubexit" + echo_cmd + "\n" + body;
}

std::string json_report(const std::string& echo_cmd, nlohmann::json data) {
    nlohmann::json j{{"config", "tubexit" + echo_cmd}, {"data", std::move(data)}};
    return j.dump() + "\n";
}

std::string single_value_csv(const Domain& dom, double coord, double value, int k,
                             const std::string& method) {
    std::string out(profile_csv_header);
    out += '\n';
    out += format_g17(coord) + "," + format_g17(value) + "," + to_string(dom.kind) + "," +
           std::to_string(k) + "," + std::to_string(dom.n) + "," + format_g17(dom.delta()) +
           "," + method + "\n";
    return out;
}

// ---------------------------------------------------------------------- solve

struct SolveArgs {
    GeometryOpts geom;
    CommonOpts common;
    std::optional<double> at;
    int grid_size = 1025;
    std::string method = "quadrature";
};

int run_solve(const SolveArgs& a, int k, const std::string& name) {
    const Domain dom = a.geom.domain();
    const KernelAccuracy acc = a.common.accuracy();

    std::string cmd = " " + name + a.geom.echo() + (k > 1 ? " --k " + std::to_string(k) : "");
    if (a.at)
        cmd += " --at " + format_g17(*a.at);
    else
        cmd += " --grid-size " + std::to_string(a.grid_size);
    cmd += " --method " + a.method + a.common.echo();

    if (a.at && k == 1) {
        const double value = dom.kind == DomainKind::tube
                                 ? exit_time_tube(dom.as_tube(), *a.at, acc)
                                 : exit_time_ball(dom.as_ball(), *a.at, acc);
        if (a.common.json) {
            nlohmann::json j{{"kind", to_string(dom.kind)}, {"n", dom.n},
                             {"radius", dom.radius},       {"k", k},
                             {"at", *a.at},                {"value", value}};
            emit(a.common, json_report(cmd, j));
        } else {
            emit(a.common, csv_report(cmd, single_value_csv(dom, *a.at, value, k, "point")));
        }
        return 0;
    }

    const auto levels =
        moment_hierarchy(dom, k, a.grid_size, acc, method_from_string(a.method));
    const RadialProfile& p = levels.back();
    if (a.at) {
        MonotoneCubic interp(0.0, p.grid[1] - p.grid[0], p.values);
        const double value = interp(*a.at);
        if (a.common.json) {
            nlohmann::json j{{"kind", to_string(dom.kind)}, {"n", dom.n},
                             {"radius", dom.radius},       {"k", k},
                             {"at", *a.at},                {"value", value}};
            emit(a.common, json_report(cmd, j));
        } else {
            emit(a.common,
                 csv_report(cmd, single_value_csv(dom, *a.at, value, k, a.method)));
        }
        return 0;
    }
    if (a.common.json)
        emit(a.common, json_report(cmd, to_json(p)));
    else
        emit(a.common, csv_report(cmd, to_csv(p)));
    return 0;
}

// --------------------------------------------------------------------- bounds

struct BoundsArgs {
    GeometryOpts geom;
    CommonOpts common;
    std::string bound = "F";
    int k = 1;
    std::optional<double> at;
    int grid_size = 257;
};

int run_bounds(const BoundsArgs& a) {
    std::string cmd = " bounds --bound " + a.bound + a.geom.echo(false) +
                      " --k " + std::to_string(a.k);
    if (a.at)
        cmd += " --at " + format_g17(*a.at);
    else
        cmd += " --grid-size " + std::to_string(a.grid_size);
    cmd += a.common.echo();

    const TubeGeometry tube = a.geom.tube();
    if (a.at) {
        double value = 0.0;
        if (a.bound == "F")
            value = lower_bound_F(tube, a.k, *a.at);
        else if (a.bound == "G")
            value = upper_bound_G(tube);
        else
            value = factorial_moment_cap(a.geom.ball(), a.k, a.common.accuracy());
        if (a.common.json) {
            nlohmann::json j{{"bound", a.bound}, {"n", tube.n},   {"delta", tube.delta},
                             {"k", a.k},         {"at", *a.at},   {"value", value}};
            emit(a.common, json_report(cmd, j));
        } else {
            std::string body = "bound,n,delta,k,at,value\n";
            body += a.bound + "," + std::to_string(tube.n) + "," + format_g17(tube.delta) +
                    "," + std::to_string(a.k) + "," + format_g17(*a.at) + "," +
                    format_g17(value) + "\n";
            emit(a.common, csv_report(cmd, body));
        }
        return 0;
    }

    BoundProfile prof;
    if (a.bound == "F")
        prof = lower_bound_profile(tube, a.k, a.grid_size);
    else if (a.bound == "G")
        prof = upper_bound_profile(tube, a.grid_size);
    else
        prof = factorial_cap_profile(a.geom.ball(), a.k, a.grid_size, a.common.accuracy());
    if (a.common.json) {
        nlohmann::json j{{"bound", to_string(prof.kind)}, {"n", prof.domain.n},
                         {"radius", prof.domain.radius},  {"k", prof.k},
                         {"grid", prof.grid},             {"values", prof.values}};
        emit(a.common, json_report(cmd, j));
    } else {
        emit(a.common, csv_report(cmd, to_csv(prof)));
    }
    return 0;
}

// ------------------------------------------------------------------- simulate

struct SimulateArgs {
    GeometryOpts geom;
    CommonOpts common;
    double start = 0.0;
    std::int64_t paths = 100000;
    double dt = 1e-5;
    std::uint64_t seed = SimulationConfig{}.seed;
    int streams = 1;
    int k_max = 1;
    bool antithetic = false;
    bool half_generator = false;
    std::uint64_t max_steps = 0;
};

int run_simulate(const SimulateArgs& a) {
    SimulationConfig cfg;
    cfg.domain = a.geom.domain();
    cfg.start = a.start;
    cfg.paths = a.paths;
    cfg.dt = a.dt;
    cfg.seed = a.seed;
    cfg.streams = a.streams;
    cfg.antithetic = a.antithetic;
    cfg.half_generator = a.half_generator;
    cfg.max_steps = a.max_steps;

    std::string cmd = " simulate" + a.geom.echo() + " --start " + format_g17(a.start) +
                      " --paths " + std::to_string(a.paths) + " --dt " + format_g17(a.dt) +
                      " --seed " + std::to_string(a.seed) + " --streams " +
                      std::to_string(a.streams) + " --k-max " + std::to_string(a.k_max);
    if (a.antithetic) cmd += " --antithetic";
    if (a.half_generator) cmd += " --half-generator";
    if (a.max_steps > 0) cmd += " --max-steps " + std::to_string(a.max_steps);
    cmd += a.common.echo();

    const ExitSampleStats st = simulate_exit(cfg, a.k_max);
    if (a.common.json)
        emit(a.common, json_report(cmd, to_json(st)));
    else
        emit(a.common,
             csv_report(cmd, stats_csv_header(a.k_max) + "\n" + to_csv_row(st) + "\n"));
    return st.nonconverged() ? nonconvergence_exit_code : 0;
}

// ----------------------------------------------------------------- volume/scan

struct VolumeArgs {
    CommonOpts common;
    int n = 2;
    double delta = 0.5;
    std::optional<double> sigma_volume;
};

int run_volume(const VolumeArgs& a) {
    const TubeGeometry geom(a.n, a.delta);
    std::string cmd = " volume --n " + std::to_string(a.n) + " --delta " + format_g17(a.delta);
    if (a.sigma_volume) cmd += " --sigma-volume " + format_g17(*a.sigma_volume);
    cmd += a.common.echo();

    const double frac = tube_volume_fraction(geom, a.common.accuracy());
    const double levy = levy_lower_bound(a.n, a.delta);
    const VolumeCap cap = rigidity_volume_cap(a.n, a.delta);

    if (a.common.json) {
        nlohmann::json j{{"n", a.n},
                         {"delta", a.delta},
                         {"tube_frac", frac},
                         {"levy_bound", levy},
                         {"volume_cap", cap.defined ? nlohmann::json(cap.value) : nlohmann::json()},
                         {"log_volume_cap",
                          cap.defined ? nlohmann::json(cap.log_value) : nlohmann::json()},
                         {"cap_defined", cap.defined}};
        if (a.sigma_volume) {
            j["sigma_volume"] = *a.sigma_volume;
            j["threshold"] = sphere_theorem_threshold(a.n, a.delta, *a.sigma_volume);
        }
        emit(a.common, json_report(cmd, j));
        return 0;
    }
    std::string body = "n,delta,tube_frac,levy_bound,volume_cap,log_volume_cap,cap_defined";
    if (a.sigma_volume) body += ",sigma_volume,threshold";
    body += "\n";
    body += std::to_string(a.n) + "," + format_g17(a.delta) + "," + format_g17(frac) + "," +
            format_g17(levy) + "," + format_g17(cap.value) + "," + format_g17(cap.log_value) +
            "," + (cap.defined ? "1" : "0");
    if (a.sigma_volume)
        body += "," + format_g17(*a.sigma_volume) + "," +
                (sphere_theorem_threshold(a.n, a.delta, *a.sigma_volume) ? "1" : "0");
    body += "\n";
    emit(a.common, csv_report(cmd, body));
    return 0;
}

struct ScanArgs {
    CommonOpts common;
    std::vector<int> n_list;
    std::vector<double> delta_list;
};

int run_scan(const ScanArgs& a) {
    std::string cmd = " scan --n ";
    for (std::size_t i = 0; i < a.n_list.size(); ++i)
        cmd += (i ? "," : "") + std::to_string(a.n_list[i]);
    cmd += " --delta ";
    for (std::size_t i = 0; i < a.delta_list.size(); ++i)
        cmd += (i ? "," : "") + format_g17(a.delta_list[i]);
    cmd += a.common.echo();

    const auto rows = scan(a.n_list, a.delta_list, a.common.accuracy());
    if (a.common.json)
        emit(a.common, json_report(cmd, to_json(rows)));
    else
        emit(a.common, csv_report(cmd, to_csv(rows)));
    return 0;
}

// ------------------------------------------------------------------- residual

struct ResidualArgs {
    GeometryOpts geom;
    CommonOpts common;
    int k = 1;
    int grid_size = 2049;
    double collar = 0.02;
    std::string method = "quadrature";
};

int run_residual(const ResidualArgs& a) {
    const Domain dom = a.geom.domain();
    std::string cmd = " residual" + a.geom.echo() + " --k " + std::to_string(a.k) +
                      " --grid-size " + std::to_string(a.grid_size) + " --collar " +
                      format_g17(a.collar) + " --method " + a.method + a.common.echo();

    const auto levels = moment_hierarchy(dom, a.k, a.grid_size, a.common.accuracy(),
                                         method_from_string(a.method));
    const double res = pde_residual(levels.back(), a.collar);
    if (a.common.json) {
        nlohmann::json j{{"kind", to_string(dom.kind)}, {"n", dom.n},
                         {"radius", dom.radius},        {"k", a.k},
                         {"grid_size", a.grid_size},    {"method", a.method},
                         {"residual", res}};
        emit(a.common, json_report(cmd, j));
    } else {
        std::string body = "kind,n,delta,k,grid_size,method,residual\n";
        body += std::string(to_string(dom.kind)) + "," + std::to_string(dom.n) + "," +
                format_g17(dom.delta()) + "," + std::to_string(a.k) + "," +
                std::to_string(a.grid_size) + "," + a.method + "," + format_g17(res) + "\n";
        emit(a.common, csv_report(cmd, body));
    }
    return 0;
}

// -------------------------------------------------------------------- riccati

struct RiccatiArgs {
    CommonOpts common;
    double k0 = 0.0;
    bool pole = false;
    double r_end = half_pi / 2.0;
    double step = 1e-5;
    double pole_offset = 1e-4;
    std::int64_t stride = 1;
};

int run_riccati(const RiccatiArgs& a) {
    std::string cmd = " riccati ";
    cmd += a.pole ? "--pole" : ("--k0 " + format_g17(a.k0));
    cmd += " --r-end " + format_g17(a.r_end) + " --step " + format_g17(a.step) +
           " --pole-offset " + format_g17(a.pole_offset) + " --stride " +
           std::to_string(a.stride) + a.common.echo();

    const double k0 = a.pole ? -std::numeric_limits<double>::infinity() : a.k0;
    const RiccatiPath path = solve_riccati(k0, a.r_end, a.step, a.pole_offset);
    if (a.common.json) {
        std::vector<double> rs, ks;
        for (std::size_t i = 0; i < path.size(); i += std::size_t(a.stride)) {
            rs.push_back(path.r[i]);
            ks.push_back(path.k[i]);
        }
        if (rs.back() != path.r.back()) {
            rs.push_back(path.r.back());
            ks.push_back(path.k.back());
        }
        emit(a.common, json_report(cmd, nlohmann::json{{"r", rs}, {"k", ks}}));
    } else {
        std::string body = "r,k\n";
        std::size_t last_emitted = 0;
        for (std::size_t i = 0; i < path.size(); i += std::size_t(a.stride)) {
            body += format_g17(path.r[i]) + "," + format_g17(path.k[i]) + "\n";
            last_emitted = i;
        }
        if (last_emitted != path.size() - 1)
            body += format_g17(path.r.back()) + "," + format_g17(path.k.back()) + "\n";
        emit(a.common, csv_report(cmd, body));
    }
    return 0;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    return out;
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "tubexit: exit times, exit moments, concentration bounds and first-passage\n"
        "Monte Carlo for equatorial tubes and geodesic balls in S^n.\n"
        "All angles are radians; --delta and --rho are complementary (rho = pi/2 - delta).\n"
        "Environment overrides: TUBEXIT_REL_TOL, TUBEXIT_ABS_TOL, TUBEXIT_MAX_SUBDIV."};
    app.require_subcommand(1);

    SolveArgs solve_args;
    auto* solve_cmd = app.add_subcommand(
        "solve", "evaluate the mean exit time u (tube) or v (ball)");
    solve_args.geom.attach(solve_cmd);
    solve_cmd->add_option("--at", solve_args.at,
                          "radial coordinate, radians; omit for a full profile");
    solve_cmd->add_option("--grid-size", solve_args.grid_size, "profile grid points")
        ->capture_default_str();
    solve_cmd->add_option("--method", solve_args.method,
                          "quadrature | ode | closed-form-n2")
        ->check(CLI::IsMember({"quadrature", "ode", "closed-form-n2"}))
        ->capture_default_str();
    solve_args.common.attach(solve_cmd);

    SolveArgs moments_args;
    int moments_k = 1;
    auto* moments_cmd =
        app.add_subcommand("moments", "evaluate level k of the exit-moment hierarchy");
    moments_args.geom.attach(moments_cmd);
    moments_cmd->add_option("--k", moments_k, "moment order (k >= 1)")->required();
    moments_cmd->add_option("--at", moments_args.at,
                            "radial coordinate, radians; omit for a full profile");
    moments_cmd->add_option("--grid-size", moments_args.grid_size, "profile grid points")
        ->capture_default_str();
    moments_cmd->add_option("--method", moments_args.method, "quadrature | ode")
        ->check(CLI::IsMember({"quadrature", "ode"}))
        ->capture_default_str();
    moments_args.common.attach(moments_cmd);

    BoundsArgs bounds_args;
    auto* bounds_cmd = app.add_subcommand(
        "bounds", "lower bound F, uniform bound G, or the factorial moment cap");
    bounds_cmd->add_option("--bound", bounds_args.bound, "F | G | factorial")
        ->check(CLI::IsMember({"F", "G", "factorial"}))
        ->capture_default_str();
    bounds_args.geom.attach(bounds_cmd, false);
    bounds_cmd->add_option("--k", bounds_args.k, "moment order (k >= 1)")
        ->capture_default_str();
    bounds_cmd->add_option("--at", bounds_args.at, "radial coordinate, radians");
    bounds_cmd->add_option("--grid-size", bounds_args.grid_size, "profile grid points")
        ->capture_default_str();
    bounds_args.common.attach(bounds_cmd);

    SimulateArgs sim_args;
    auto* sim_cmd = app.add_subcommand(
        "simulate", "first-passage Monte Carlo of the radial diffusion");
    sim_args.geom.attach(sim_cmd);
    sim_cmd->add_option("--start", sim_args.start,
                        "start coordinate, radians (signed for the tube)")
        ->capture_default_str();
    sim_cmd->add_option("--paths", sim_args.paths, "number of simulated paths")
        ->capture_default_str();
    sim_cmd->add_option("--dt", sim_args.dt, "Euler-Maruyama time step")
        ->capture_default_str();
    sim_cmd->add_option("--seed", sim_args.seed, "master RNG seed (fixed default)")
        ->capture_default_str();
    sim_cmd->add_option("--streams", sim_args.streams,
                        "worker streams; the result does not depend on it")
        ->capture_default_str();
    sim_cmd->add_option("--k-max", sim_args.k_max, "record raw moments up to this order")
        ->capture_default_str();
    sim_cmd->add_flag("--antithetic", sim_args.antithetic, "antithetic path pairs");
    sim_cmd->add_flag("--half-generator", sim_args.half_generator,
                      "use the Delta/2 generator convention (times double)");
    sim_cmd->add_option("--max-steps", sim_args.max_steps,
                        "per-path step cap (0: 1e9/dt)")
        ->capture_default_str();
    sim_args.common.attach(sim_cmd);

    VolumeArgs vol_args;
    auto* vol_cmd = app.add_subcommand(
        "volume", "tube volume fraction, Levy bound and rigidity volume cap");
    vol_cmd->add_option("--n", vol_args.n, "dimension of the ambient sphere")->required();
    vol_cmd->add_option("--delta", vol_args.delta, "tube half-width, radians")->required();
    vol_cmd->add_option("--sigma-volume", vol_args.sigma_volume,
                        "hypersurface volume for the sphere-theorem threshold");
    vol_args.common.attach(vol_cmd);

    ScanArgs scan_args;
    std::string scan_n, scan_delta;
    auto* scan_cmd =
        app.add_subcommand("scan", "concentration diagnostics over an (n, delta) grid");
    scan_cmd->add_option("--n", scan_n, "comma-separated dimensions, e.g. 10,100,1000")
        ->required();
    scan_cmd->add_option("--delta", scan_delta, "comma-separated half-widths, radians")
        ->required();
    scan_args.common.attach(scan_cmd);

    ResidualArgs res_args;
    auto* res_cmd = app.add_subcommand(
        "residual", "finite-difference defect of the hierarchy Poisson equation");
    res_args.geom.attach(res_cmd);
    res_cmd->add_option("--k", res_args.k, "moment order (k >= 1)")->capture_default_str();
    res_cmd->add_option("--grid-size", res_args.grid_size, "profile grid points")
        ->capture_default_str();
    res_cmd->add_option("--collar", res_args.collar,
                        "radial collar skipped near the pole (ball only), radians")
        ->capture_default_str();
    res_cmd->add_option("--method", res_args.method, "quadrature | ode")
        ->check(CLI::IsMember({"quadrature", "ode"}))
        ->capture_default_str();
    res_args.common.attach(res_cmd);

    RiccatiArgs ric_args;
    auto* ric_cmd = app.add_subcommand(
        "riccati", "integrate the principal-curvature flow k' = k^2 + 1");
    auto* k0_opt = ric_cmd->add_option("--k0", ric_args.k0,
                                       "initial principal curvature at r = 0")
                       ->capture_default_str();
    ric_cmd->add_flag("--pole", ric_args.pole,
                      "start from the geodesic-sphere condition k(0+) = -infinity")
        ->excludes(k0_opt);
    ric_cmd->add_option("--r-end", ric_args.r_end, "integration endpoint, radians")
        ->required();
    ric_cmd->add_option("--step", ric_args.step, "integrator step, radians")
        ->capture_default_str();
    ric_cmd->add_option("--pole-offset", ric_args.pole_offset,
                        "start offset for the pole condition, radians")
        ->capture_default_str();
    ric_cmd->add_option("--stride", ric_args.stride, "emit every stride-th sample")
        ->capture_default_str();
    ric_args.common.attach(ric_cmd);

    try {
        app.parse(argc, argv);
        if (solve_cmd->parsed()) return run_solve(solve_args, 1, "solve");
        if (moments_cmd->parsed()) return run_solve(moments_args, moments_k, "moments");
        if (bounds_cmd->parsed()) return run_bounds(bounds_args);
        if (sim_cmd->parsed()) return run_simulate(sim_args);
        if (vol_cmd->parsed()) return run_volume(vol_args);
        if (scan_cmd->parsed()) {
            scan_args.n_list = parse_int_list(scan_n);
            scan_args.delta_list = parse_double_list(scan_delta);
            return run_scan(scan_args);
        }
        if (res_cmd->parsed()) return run_residual(res_args);
        if (ric_cmd->parsed()) return run_riccati(ric_args);
        return parse_exit_code;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return parse_exit_code;
    } catch (const tubexit::accuracy_error& e) {
        std::cerr << "tubexit: accuracy: " << e.what() << "\n";
        return accuracy_exit_code;
    } catch (const tubexit::nonconvergence_error& e) {
        std::cerr << "tubexit: nonconvergence: " << e.what() << "\n";
        return nonconvergence_exit_code;
    } catch (const std::domain_error& e) {
        std::cerr << "tubexit: invalid input: " << e.what() << "\n";
        return parse_exit_code;
    } catch (const std::invalid_argument& e) {
        std::cerr << "tubexit: invalid input: " << e.what() << "\n";
        return parse_exit_code;
    } catch (const std::exception& e) {
        std::cerr << "tubexit: error: " << e.what() << "\n";
        return 1;
    }
}
