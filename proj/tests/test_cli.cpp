#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "udw/response.hpp"

namespace {

std::string g_cli; // path to the udw_gme binary, from argv[1]

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = g_cli + " " + args;
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

std::vector<double> csv_row(const std::string& line) {
    std::vector<double> vals;
    std::istringstream in(line);
    std::string cell;
    while (std::getline(in, cell, ',')) {
        try {
            vals.push_back(std::stod(cell));
        } catch (...) {
            vals.push_back(std::nan(""));
        }
    }
    return vals;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kTmp = "/tmp/udw_cli_test";

} // namespace

TEST_CASE("response row matches the library") {
    const RunResult r =
        run_cli("response --a 0 --omega 1 --sigma 0.4 --L 200 --lambda 0.1 2>/dev/null");
    REQUIRE(r.exit_code == 0);
    const auto rows = lines_of(r.out);
    REQUIRE(rows.size() == 1);
    const auto vals = csv_row(rows[0]);
    REQUIRE(vals.size() == 5);

    udw::DetectorParams p;
    p.a = 0.0;
    p.omega = 1.0;
    p.sigma = 0.4;
    p.cavity_length = 200.0;
    p.coupling = 0.1;
    const udw::ResponseAmplitudes amps = udw::response_amplitudes(p);
    CHECK(vals[0] == 0.0);
    CHECK(vals[1] == doctest::Approx(std::abs(amps.eta0)).epsilon(1e-12));
    CHECK(vals[2] == doctest::Approx(std::abs(amps.eta1)).epsilon(1e-12));
    CHECK(vals[3] == doctest::Approx(amps.p).epsilon(1e-12));
    CHECK(static_cast<int>(vals[4]) == amps.modes_used);
}

TEST_CASE("validation failures exit with code 2") {
    CHECK(run_cli("response --sigma 0 2>/dev/null").exit_code == 2);
    CHECK(run_cli("response --tau-window 1 2>/dev/null").exit_code == 2);
    CHECK(run_cli("sweep --a-min 0.4 --a-max 0.1 2>/dev/null").exit_code == 2);
    CHECK(run_cli("nonsense-subcommand 2>/dev/null").exit_code == 2);
}

TEST_CASE("convergence failures exit with code 3") {
    CHECK(run_cli("response --a 0.3 --mode-cap 3 2>/dev/null").exit_code == 3);
}

TEST_CASE("unwritable output exits with code 4") {
    CHECK(run_cli("response --a 0 --output /nonexistent-dir/out.csv 2>/dev/null").exit_code == 4);
}

TEST_CASE("doubling lambda quadruples P") {
    const auto r1 = run_cli("response --a 0 --lambda 0.1 2>/dev/null");
    const auto r2 = run_cli("response --a 0 --lambda 0.2 2>/dev/null");
    REQUIRE(r1.exit_code == 0);
    REQUIRE(r2.exit_code == 0);
    const double p1 = csv_row(lines_of(r1.out)[0])[3];
    const double p2 = csv_row(lines_of(r2.out)[0])[3];
    CHECK(p2 / p1 == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("gme subcommand evaluates state files") {
    namespace fs = std::filesystem;
    fs::create_directories(kTmp);
    const fs::path file = fs::path(kTmp) / "states.txt";
    {
        std::ofstream out(file);
        out << "# three records\n";
        out << "3; 0.5 0 0 0; 0.5 0 0 0; 0.5 0 0 0 0 0 0 0\n";
        out << "3; 1 0 0 0; 0 0 0 0; 0 0 0 0 0 0 0 0\n";
        out << "3; 0.4 0.1 0 0; 0.4 0.1 0 0; 0.35 0 0.05 0 0 0 0 0\n";
    }
    const RunResult r = run_cli("gme " + file.string() + " 2>/dev/null");
    REQUIRE(r.exit_code == 0);
    const auto rows = lines_of(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(std::stod(rows[0]) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::stod(rows[1]) == 0.0);
    CHECK(std::stod(rows[2]) == doctest::Approx(0.5).epsilon(1e-12));

    const fs::path bad = fs::path(kTmp) / "bad.txt";
    {
        std::ofstream out(bad);
        out << "3; 0.5 0 0 0; 0.5 0 0 0; 0.5 0 0 0 0 0 0 0\n";
        out << "3; 0.5 0 0; broken\n";
    }
    CHECK(run_cli("gme " + bad.string() + " 2>/dev/null").exit_code == 2);
    CHECK(run_cli("gme /does/not/exist 2>/dev/null").exit_code == 4);
}

TEST_CASE("sweep emits the pinned header and echoes the grid") {
    const RunResult r = run_cli(
        "sweep --omega 1 --sigma 0.4 --a-min 0 --a-max 0.2 --steps 5 --workers 2 2>/dev/null");
    REQUIRE(r.exit_code == 0);
    const auto rows = lines_of(r.out);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0] == "a,eta0_abs,eta1_abs,P,E,dp_sign,de_sign,regime");
    CHECK(csv_row(rows[1])[0] == 0.0);
    CHECK(csv_row(rows[5])[0] == doctest::Approx(0.2));

    // identical invocations must produce identical bytes
    const RunResult again = run_cli(
        "sweep --omega 1 --sigma 0.4 --a-min 0 --a-max 0.2 --steps 5 --workers 7 2>/dev/null");
    CHECK(again.out == r.out);
}

TEST_CASE("tsv format switches the separator") {
    const RunResult r = run_cli(
        "sweep --omega 1 --sigma 0.4 --a-min 0 --a-max 0.1 --steps 2 --format tsv 2>/dev/null");
    REQUIRE(r.exit_code == 0);
    CHECK(lines_of(r.out)[0] == "a\teta0_abs\teta1_abs\tP\tE\tdp_sign\tde_sign\tregime");
}

TEST_CASE("config file feeds options and flags override it") {
    namespace fs = std::filesystem;
    fs::create_directories(kTmp);
    const fs::path cfg = fs::path(kTmp) / "run.cfg";
    {
        std::ofstream out(cfg);
        out << "# detector setup\n";
        out << "omega = 2.5\n";
        out << "sigma = 0.4\n";
    }
    const RunResult direct = run_cli("response --a 0 --omega 2.5 --sigma 0.4 2>/dev/null");
    const RunResult from_cfg =
        run_cli("response --a 0 --config " + cfg.string() + " 2>/dev/null");
    REQUIRE(direct.exit_code == 0);
    REQUIRE(from_cfg.exit_code == 0);
    CHECK(from_cfg.out == direct.out);

    const RunResult overridden =
        run_cli("response --a 0 --omega 1 --config " + cfg.string() + " 2>/dev/null");
    const RunResult direct1 = run_cli("response --a 0 --omega 1 --sigma 0.4 2>/dev/null");
    CHECK(overridden.out == direct1.out);
    CHECK(overridden.out != from_cfg.out);
}

TEST_CASE("UDW_GME_WORKERS only sets the default parallelism") {
    const std::string base =
        "--omega 1 --sigma 0.4 --a-min 0 --a-max 0.1 --steps 3 2>/dev/null";
    const RunResult serial = run_cli("sweep --workers 1 " + base);
    const RunResult env = run_cli("sweep " + base); // UDW_GME_WORKERS=5 exported below
    REQUIRE(serial.exit_code == 0);
    REQUIRE(env.exit_code == 0);
    CHECK(env.out == serial.out);
}

int main(int argc, char** argv) {
    if (argc > 1 && argv[1][0] != '-') {
        g_cli = argv[1];
        --argc;
        ++argv;
    } else if (const char* env = std::getenv("UDW_CLI_BIN")) {
        g_cli = env;
    } else {
        std::fprintf(stderr, "usage: test_cli <path-to-udw_gme>\n");
        return 1;
    }
    setenv("UDW_GME_WORKERS", "5", 1);
    doctest::Context ctx(argc, argv);
    return ctx.run();
}
