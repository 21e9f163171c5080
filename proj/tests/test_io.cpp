#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "udw/xstate_io.hpp"

using namespace udw;

TEST_CASE("parse a GHZ record") {
    const XState s = parse_xstate_line("3; 0.5 0 0 0; 0.5 0 0 0; 0.5 0 0 0 0 0 0 0");
    CHECK(s.n_qubits == 3);
    CHECK(s.a_diag[0] == 0.5);
    CHECK(s.z_anti[0] == Complex{0.5, 0.0});
    CHECK(gme_xstate(s) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("malformed records are rejected with a reason") {
    CHECK_THROWS_AS(parse_xstate_line("3; 0.5 0 0 0; 0.5 0 0 0"), ValidationError);
    CHECK_THROWS_AS(parse_xstate_line("x; 1 0; 0 0; 0 0 0 0"), ValidationError);
    CHECK_THROWS_AS(parse_xstate_line("2; 1 0 0; 0 0; 0 0 0 0"), ValidationError);
    CHECK_THROWS_AS(parse_xstate_line("2; 1 zz; 0 0; 0 0 0 0"), ValidationError);
    CHECK_THROWS_AS(parse_xstate_line("1; 1; 0; 0 0"), ValidationError);
    // valid shape, invalid state (trace 2)
    CHECK_THROWS_AS(parse_xstate_line("2; 1 0; 1 0; 0 0 0 0"), InvalidState);
    // positivity violated
    CHECK_THROWS_AS(parse_xstate_line("2; 1 0; 0 0; 0.5 0 0 0"), InvalidState);
}

TEST_CASE("stream reading skips comments and reports line numbers") {
    std::istringstream good("# GHZ then product\n"
                            "3; 0.5 0 0 0; 0.5 0 0 0; 0.5 0 0 0 0 0 0 0\n"
                            "\n"
                            "2; 1 0; 0 0; 0 0 0 0\n");
    const auto states = read_xstates(good);
    REQUIRE(states.size() == 2);
    CHECK(gme_xstate(states[0]) == doctest::Approx(1.0));
    CHECK(gme_xstate(states[1]) == 0.0);

    std::istringstream bad("2; 1 0; 0 0; 0 0 0 0\n"
                           "2; broken\n");
    try {
        read_xstates(bad);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("format/parse round trip") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int n_qubits = 2 + static_cast<int>(uni(rng) * 3);
        const std::size_t n = std::size_t{1} << (n_qubits - 1);
        XState s;
        s.n_qubits = n_qubits;
        s.a_diag.resize(n);
        s.b_diag.resize(n);
        s.z_anti.resize(n);
        double trace = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s.a_diag[i] = uni(rng);
            s.b_diag[i] = uni(rng);
            trace += s.a_diag[i] + s.b_diag[i];
        }
        for (std::size_t i = 0; i < n; ++i) {
            s.a_diag[i] /= trace;
            s.b_diag[i] /= trace;
            const double r = 0.9 * uni(rng) * std::sqrt(s.a_diag[i] * s.b_diag[i]);
            const double th = 6.28 * uni(rng);
            s.z_anti[i] = r * Complex{std::cos(th), std::sin(th)};
        }
        // normalization to exactly 1 within parse tolerance needs a final touch
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += s.a_diag[i] + s.b_diag[i];
        s.a_diag[0] += 1.0 - sum;

        const XState back = parse_xstate_line(format_xstate(s));
        CHECK(back.n_qubits == s.n_qubits);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(back.a_diag[i] == doctest::Approx(s.a_diag[i]).epsilon(1e-13));
            CHECK(std::abs(back.z_anti[i] - s.z_anti[i]) <= 1e-13);
        }
        CHECK(gme_xstate(back) == doctest::Approx(gme_xstate(s)).epsilon(1e-10));
    }
}
