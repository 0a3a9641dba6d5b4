#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <sys/wait.h>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <cctype>

using Catch::Approx;

namespace {

struct RunResult {
    int status = -1;
    std::string out;
};

std::string binary() {
    const char* p = std::getenv("TUBEXIT_BIN");
    REQUIRE(p != nullptr);
    return p;
}

RunResult run(const std::string& args) {
    RunResult r;
    const std::string cmd = binary() + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
    const int rc = pclose(pipe);
    r.status = WEXITSTATUS(rc);
    return r;
}

// value column of the first data row of a profile/point CSV
double first_value(const std::string& csv) {
    std::size_t pos = 0;
    while (pos < csv.size() && (csv[pos] == '#' || csv.compare(pos, 12, "radial_coord") == 0 ||
                                csv.find_first_of('\n', pos) == pos)) {
        pos = csv.find('\n', pos);
        REQUIRE(pos != std::string::npos);
        ++pos;
    }
    const std::size_t comma = csv.find(',', pos);
    const std::size_t comma2 = csv.find(',', comma + 1);
    return std::stod(csv.substr(comma + 1, comma2 - comma - 1));
}

} // namespace

TEST_CASE("solve evaluates the n = 2 tube center value") {
    const auto r = run("solve --kind tube --n 2 --delta 0.7853981633974483 --at 0");
    CHECK(r.status == 0);
    CHECK(first_value(r.out) == Approx(0.34657359027997264).epsilon(1e-9));
}

TEST_CASE("solve at the boundary returns zero") {
    const auto r =
        run("solve --kind tube --n 2 --delta 0.7853981633974483 --at 0.7853981633974483");
    CHECK(r.status == 0);
    CHECK(first_value(r.out) == 0.0);
}

TEST_CASE("solve accepts rho for the ball and reports json") {
    const auto r = run("solve --kind ball --n 2 --rho 0.7853981633974483 --at 0 --json");
    CHECK(r.status == 0);
    CHECK(r.out.find("\"config\":\"tubexit solve --kind ball") != std::string::npos);
    CHECK(r.out.find("\"value\":0.158347183") != std::string::npos);
}

TEST_CASE("reports start with a machine-readable effective configuration") {
    const auto r = run("solve --kind tube --n 3 --delta 0.5 --at 0.1");
    CHECK(r.status == 0);
    CHECK(r.out.rfind("# cmd: tubexit solve --kind tube --n 3 --delta 0.5 --at "
                      "0.10000000000000001 --method quadrature --rel-tol 1e-10",
                      0) == 0);
    // rerunning the logged configuration reproduces the bytes
    const std::string echoed = r.out.substr(std::string("# cmd: tubexit ").size(),
                                            r.out.find('\n') - std::string("# cmd: tubexit ").size());
    const auto again = run(echoed);
    CHECK(again.status == 0);
    CHECK(again.out == r.out);
}

TEST_CASE("scan emits increasing u_center along n") {
    const auto r = run("scan --n 10,100 --delta 0.5");
    CHECK(r.status == 0);
    REQUIRE(r.out.find("n,delta,F_mid") != std::string::npos);
    const std::size_t row1 = r.out.find("\n10,");
    const std::size_t row2 = r.out.find("\n100,");
    REQUIRE(row1 != std::string::npos);
    REQUIRE(row2 != std::string::npos);
    // u_center is the fifth column
    auto nth_field = [&](std::size_t rowpos, int idx) {
        std::size_t p = rowpos + 1;
        for (int i = 0; i < idx; ++i) p = r.out.find(',', p) + 1;
        return std::stod(r.out.substr(p, r.out.find_first_of(",\n", p) - p));
    };
    CHECK(nth_field(row1, 4) < nth_field(row2, 4));
}

TEST_CASE("simulate runs are byte-identical across 1 and 8 worker streams") {
    const std::string base =
        "simulate --kind tube --n 2 --delta 0.7 --start 0 --paths 600 --dt 1e-3 --seed 42";
    const auto s1 = run(base + " --streams 1");
    const auto s1again = run(base + " --streams 1");
    const auto s8 = run(base + " --streams 8");
    CHECK(s1.status == 0);
    CHECK(s1.out == s1again.out);
    // sample statistics coincide; only the echoed streams provenance differs
    const auto normalize = [](const std::string& s) {
        std::string out;
        std::stringstream ss(s);
        std::string line;
        while (std::getline(ss, line)) {
            if (line.rfind("# cmd:", 0) == 0) {
                const auto p = line.find("--streams");
                if (p != std::string::npos) line.erase(p, std::string("--streams 8").size());
            } else if (!line.empty() && std::isdigit(line.front())) {
                // drop the streams column (7th field) of the stats row
                std::string rebuilt;
                std::stringstream fs(line);
                std::string field;
                for (int i = 0; std::getline(fs, field, ','); ++i)
                    if (i != 6) rebuilt += field + ",";
                line = rebuilt;
            }
            out += line + "\n";
        }
        return out;
    };
    CHECK(normalize(s1.out) == normalize(s8.out));
}

TEST_CASE("exit codes map error classes") {
    CHECK(run("solve --kind tube --n 1 --delta 0.5 --at 0").status == 2);  // invalid n
    CHECK(run("solve --kind tube --n 2 --delta 2.0 --at 0").status == 2);  // delta range
    CHECK(run("solve --kind tube --n 2 --delta 0.5 --at 0.9").status == 2); // outside domain
    CHECK(run("solve --kind tube --n 2").status == 2);                     // missing radius
    CHECK(run("bogus-subcommand").status == 2);
    CHECK(run("--help").status == 0);
    // nested tolerance cannot be certified on a 16-point grid: accuracy error
    CHECK(run("moments --kind tube --n 2 --delta 0.5 --k 3 --grid-size 16").status == 3);
    // step cap trips the nonconvergence status
    CHECK(run("simulate --kind tube --n 2 --delta 1.4 --paths 20 --dt 1e-6 --max-steps 50")
              .status == 4);
}

TEST_CASE("help text lists flags with radians and defaults") {
    const auto r = run("simulate --help");
    CHECK(r.status == 0);
    CHECK(r.out.find("radians") != std::string::npos);
    CHECK(r.out.find("--dt") != std::string::npos);
    CHECK(r.out.find("--seed") != std::string::npos);
    CHECK(r.out.find("--streams") != std::string::npos);
    CHECK(r.out.find("1e-05") != std::string::npos); // default dt echoed
}

TEST_CASE("failed validation never leaves a partial output file") {
    namespace fs = std::filesystem;
    const fs::path target = fs::temp_directory_path() / "tubexit_cli_test_out.csv";
    std::error_code ec;
    fs::remove(target, ec);
    const auto r = run("solve --kind tube --n 2 --delta 9.0 -o " + target.string());
    CHECK(r.status == 2);
    CHECK_FALSE(fs::exists(target));
    const auto ok = run("solve --kind tube --n 2 --delta 0.5 --at 0 -o " + target.string());
    CHECK(ok.status == 0);
    CHECK(fs::exists(target));
    std::ifstream in(target);
    std::string line;
    std::getline(in, line);
    CHECK(line.rfind("# cmd: tubexit solve", 0) == 0);
    fs::remove(target, ec);
}

TEST_CASE("riccati subcommand integrates both initial conditions") {
    const auto r = run("riccati --k0 0 --r-end 0.7853981633974483 --step 1e-4 --stride 500");
    CHECK(r.status == 0);
    const auto last_line = [](const std::string& s) {
        const auto end = s.find_last_not_of('\n');
        const auto start = s.rfind('\n', end);
        return s.substr(start + 1, end - start);
    };
    const std::string tail = last_line(r.out);
    const double k_final = std::stod(tail.substr(tail.find(',') + 1));
    CHECK(k_final == Approx(1.0).margin(1e-6));

    const auto p = run("riccati --pole --r-end 0.7853981633974483 --step 1e-4 --stride 1000");
    CHECK(p.status == 0);
    const std::string ptail = last_line(p.out);
    CHECK(std::stod(ptail.substr(ptail.find(',') + 1)) == Approx(-1.0).margin(1e-4));

    CHECK(run("riccati --k0 1 --r-end 0.7853981633974483 --step 1e-4").status == 2); // blow-up
}

TEST_CASE("volume subcommand reports the threshold when sigma is given") {
    const auto r = run("volume --n 51 --delta 0.5 --sigma-volume 1e16 --json");
    CHECK(r.status == 0);
    CHECK(r.out.find("\"cap_defined\":true") != std::string::npos);
    CHECK(r.out.find("\"threshold\":") != std::string::npos);
    const auto vac = run("volume --n 2 --delta 0.1 --json");
    CHECK(vac.status == 0);
    CHECK(vac.out.find("\"cap_defined\":false") != std::string::npos);
    CHECK(vac.out.find("\"volume_cap\":null") != std::string::npos);
}
