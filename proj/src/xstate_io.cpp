#include "udw/xstate_io.hpp"

#include <cstdio>
#include <istream>
#include <sstream>

namespace udw {
namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<double> parse_numbers(const std::string& s, std::size_t expect,
                                  const char* what) {
    std::istringstream in(s);
    std::vector<double> out;
    double v;
    while (in >> v) out.push_back(v);
    std::string rest;
    if (in.clear(), in >> rest)
        throw ValidationError(std::string("unparsable token in ") + what + " section");
    if (out.size() != expect) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%s section: expected %zu numbers, got %zu",
                      what, expect, out.size());
        throw ValidationError(buf);
    }
    return out;
}

} // namespace

XState parse_xstate_line(const std::string& line) {
    const std::vector<std::string> parts = split(line, ';');
    if (parts.size() != 4)
        throw ValidationError("record must have 4 ';'-separated sections (N; a; b; z)");

    std::istringstream head(parts[0]);
    int n_qubits = 0;
    std::string rest;
    if (!(head >> n_qubits) || (head >> rest))
        throw ValidationError("first section must be the qubit count N");
    if (n_qubits < 2 || n_qubits > 30)
        throw ValidationError("qubit count N out of range [2, 30]");

    const std::size_t n = std::size_t{1} << (n_qubits - 1);
    XState s;
    s.n_qubits = n_qubits;
    s.a_diag = parse_numbers(parts[1], n, "a");
    s.b_diag = parse_numbers(parts[2], n, "b");
    const std::vector<double> zz = parse_numbers(parts[3], 2 * n, "z");
    s.z_anti.resize(n);
    for (std::size_t i = 0; i < n; ++i) s.z_anti[i] = Complex{zz[2 * i], zz[2 * i + 1]};
    s.validate();
    return s;
}

std::vector<XState> read_xstates(std::istream& in) {
    std::vector<XState> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        try {
            out.push_back(parse_xstate_line(line));
        } catch (const Error& e) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "line %zu: ", lineno);
            if (dynamic_cast<const InvalidState*>(&e))
                throw InvalidState(buf + std::string(e.what()));
            throw ValidationError(buf + std::string(e.what()));
        }
    }
    return out;
}

std::string format_xstate(const XState& state) {
    std::string out;
    char buf[40];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof(buf), " %.15g", v);
        out += buf;
    };
    std::snprintf(buf, sizeof(buf), "%d;", state.n_qubits);
    out += buf;
    for (double v : state.a_diag) put(v);
    out += ";";
    for (double v : state.b_diag) put(v);
    out += ";";
    for (const Complex& z : state.z_anti) {
        put(z.real());
        put(z.imag());
    }
    return out;
}

} // namespace udw
