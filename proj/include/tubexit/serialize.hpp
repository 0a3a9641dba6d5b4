#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "tubexit/concentration.hpp"
#include "tubexit/montecarlo.hpp"
#include "tubexit/profile.hpp"

namespace tubexit {

// 17 significant digits: enough for exact double round trips in CSV.
inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline constexpr const char* profile_csv_header = "radial_coord,value,kind,k,n,delta,method";

inline std::string to_csv(const RadialProfile& p) {
    std::string out(profile_csv_header);
    out += '\n';
    const std::string tail = std::string(",") + to_string(p.domain.kind) + "," +
                             std::to_string(p.k) + "," + std::to_string(p.domain.n) + "," +
                             format_g17(p.domain.delta()) + "," + to_string(p.method) + "\n";
    for (std::size_t j = 0; j < p.grid.size(); ++j)
        out += format_g17(p.grid[j]) + "," + format_g17(p.values[j]) + tail;
    return out;
}

inline std::string to_csv(const BoundProfile& b) {
    std::string out(profile_csv_header);
    out += '\n';
    const std::string tail = std::string(",") + to_string(b.kind) + "," +
                             std::to_string(b.k) + "," + std::to_string(b.domain.n) + "," +
                             format_g17(b.domain.delta()) + ",bound\n";
    for (std::size_t j = 0; j < b.grid.size(); ++j)
        out += format_g17(b.grid[j]) + "," + format_g17(b.values[j]) + tail;
    return out;
}

inline ProfileMethod method_from_string(const std::string& s) {
    if (s == "quadrature") return ProfileMethod::quadrature;
    if (s == "ode") return ProfileMethod::ode;
    if (s == "closed-form-n2") return ProfileMethod::closed_form_n2;
    throw std::invalid_argument("unknown profile method: " + s);
}

inline DomainKind domain_kind_from_string(const std::string& s) {
    if (s == "tube") return DomainKind::tube;
    if (s == "ball") return DomainKind::ball;
    throw std::invalid_argument("unknown domain kind: " + s);
}

inline nlohmann::json to_json(const RadialProfile& p) {
    return nlohmann::json{{"kind", to_string(p.domain.kind)},
                          {"n", p.domain.n},
                          {"radius", p.domain.radius},
                          {"k", p.k},
                          {"grid", p.grid},
                          {"values", p.values},
                          {"prev_values", p.prev_values},
                          {"method", to_string(p.method)},
                          {"tolerance", p.tolerance}};
}

inline RadialProfile profile_from_json(const nlohmann::json& j) {
    RadialProfile p;
    p.domain.kind = domain_kind_from_string(j.at("kind").get<std::string>());
    p.domain.n = j.at("n").get<int>();
    p.domain.radius = j.at("radius").get<double>();
    p.k = j.at("k").get<int>();
    p.grid = j.at("grid").get<std::vector<double>>();
    p.values = j.at("values").get<std::vector<double>>();
    p.prev_values = j.at("prev_values").get<std::vector<double>>();
    p.method = method_from_string(j.at("method").get<std::string>());
    p.tolerance = j.at("tolerance").get<double>();
    return p;
}

inline nlohmann::json to_json(const ExitSampleStats& s) {
    return nlohmann::json{{"count", s.count},
                          {"mean", s.mean},
                          {"variance", s.variance},
                          {"raw_moments", s.raw_moments},
                          {"std_errors", s.std_errors},
                          {"seed", s.seed},
                          {"streams", s.streams},
                          {"dt", s.dt},
                          {"capped_paths", s.capped_paths}};
}

inline ExitSampleStats stats_from_json(const nlohmann::json& j) {
    ExitSampleStats s;
    s.count = j.at("count").get<std::int64_t>();
    s.mean = j.at("mean").get<double>();
    s.variance = j.at("variance").get<double>();
    s.raw_moments = j.at("raw_moments").get<std::vector<double>>();
    s.std_errors = j.at("std_errors").get<std::vector<double>>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.streams = j.at("streams").get<int>();
    s.dt = j.at("dt").get<double>();
    s.capped_paths = j.at("capped_paths").get<std::int64_t>();
    return s;
}

inline std::string stats_csv_header(int k_max) {
    std::string h = "count,mean,variance";
    for (int k = 1; k <= k_max; ++k) h += ",m" + std::to_string(k);
    for (int k = 1; k <= k_max; ++k) h += ",se" + std::to_string(k);
    h += ",seed,streams,dt,capped_paths";
    return h;
}

inline std::string to_csv_row(const ExitSampleStats& s) {
    std::string out = std::to_string(s.count) + "," + format_g17(s.mean) + "," +
                      format_g17(s.variance);
    for (double m : s.raw_moments) out += "," + format_g17(m);
    for (double e : s.std_errors) out += "," + format_g17(e);
    out += "," + std::to_string(s.seed) + "," + std::to_string(s.streams) + "," +
           format_g17(s.dt) + "," + std::to_string(s.capped_paths);
    return out;
}

inline constexpr const char* scan_csv_header =
    "n,delta,F_mid,G,u_center,v_center,tube_frac,levy_bound,volume_cap,cap_defined";

inline std::string to_csv(const std::vector<ScanRow>& rows) {
    std::string out(scan_csv_header);
    out += '\n';
    for (const auto& r : rows) {
        out += std::to_string(r.n) + "," + format_g17(r.delta) + "," + format_g17(r.F_mid) +
               "," + format_g17(r.G) + "," + format_g17(r.u_center) + "," +
               format_g17(r.v_center) + "," + format_g17(r.tube_frac) + "," +
               format_g17(r.levy_bound) + "," + format_g17(r.volume_cap) + "," +
               (r.cap_defined ? "1" : "0") + "\n";
    }
    return out;
}

inline nlohmann::json to_json(const ScanRow& r) {
    nlohmann::json j{{"n", r.n},
                     {"delta", r.delta},
                     {"F_mid", r.F_mid},
                     {"G", r.G},
                     {"u_center", r.u_center},
                     {"v_center", r.v_center},
                     {"tube_frac", r.tube_frac},
                     {"levy_bound", r.levy_bound},
                     {"cap_defined", r.cap_defined}};
    if (r.cap_defined)
        j["volume_cap"] = r.volume_cap;
    else
        j["volume_cap"] = nullptr;
    return j;
}

inline nlohmann::json to_json(const std::vector<ScanRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) arr.push_back(to_json(r));
    return arr;
}

inline ScanRow scan_row_from_json(const nlohmann::json& j) {
    ScanRow r;
    r.n = j.at("n").get<int>();
    r.delta = j.at("delta").get<double>();
    r.F_mid = j.at("F_mid").get<double>();
    r.G = j.at("G").get<double>();
    r.u_center = j.at("u_center").get<double>();
    r.v_center = j.at("v_center").get<double>();
    r.tube_frac = j.at("tube_frac").get<double>();
    r.levy_bound = j.at("levy_bound").get<double>();
    r.cap_defined = j.at("cap_defined").get<bool>();
    r.volume_cap = j.at("volume_cap").is_null() ? std::numeric_limits<double>::quiet_NaN()
                                                : j.at("volume_cap").get<double>();
    return r;
}

} // namespace tubexit
