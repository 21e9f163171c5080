#include "udw/gme.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>

namespace udw {
namespace {

constexpr double kStateTol = 1e-12;
constexpr int kMaxQubitsExhaustive = 14;

bool is_pow2(std::size_t v) { return v && (v & (v - 1)) == 0; }

} // namespace

void XState::validate() const {
    if (n_qubits < 2) throw InvalidState("XState: need at least 2 qubits");
    const std::size_t n = std::size_t{1} << (n_qubits - 1);
    if (a_diag.size() != n || b_diag.size() != n || z_anti.size() != n)
        throw InvalidState("XState: block sizes must equal 2^(N-1)");
    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(a_diag[i] >= 0.0) || !(b_diag[i] >= 0.0))
            throw InvalidState("XState: diagonal entries must be nonnegative");
        if (std::abs(z_anti[i]) > std::sqrt(a_diag[i] * b_diag[i]) + kStateTol)
            throw InvalidState("XState: |z_i| <= sqrt(a_i b_i) violated");
        trace += a_diag[i] + b_diag[i];
    }
    if (std::abs(trace - 1.0) > kStateTol)
        throw InvalidState("XState: trace must be 1");
}

void PureState::validate() const {
    if (n_qubits < 1) throw InvalidState("PureState: need at least 1 qubit");
    if (amplitudes.size() != (std::size_t{1} << n_qubits))
        throw InvalidState("PureState: amplitude count must be 2^N");
    double norm2 = 0.0;
    for (const Complex& c : amplitudes) norm2 += std::norm(c);
    if (std::abs(norm2 - 1.0) > kStateTol)
        throw InvalidState("PureState: state must be normalized");
}

double gme_xstate(const XState& state) {
    state.validate();
    const std::size_t n = state.pairs();
    double total = 0.0;
    std::vector<double> root(n);
    for (std::size_t i = 0; i < n; ++i) {
        root[i] = std::sqrt(state.a_diag[i] * state.b_diag[i]);
        total += root[i];
    }
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        best = std::max(best, std::abs(state.z_anti[i]) - (total - root[i]));
    return 2.0 * std::max(0.0, best);
}

XState basis_swap(const XState& state) {
    state.validate();
    XState out = state;
    out.a_diag = state.b_diag;
    out.b_diag = state.a_diag;
    for (auto& z : out.z_anti) z = std::conj(z);
    return out;
}

DensityMatrix partial_trace(const PureState& state, const std::vector<int>& keep) {
    state.validate();
    const int n = state.n_qubits;
    if (keep.empty() || keep.size() >= static_cast<std::size_t>(n))
        throw BadSubset("partial_trace: keep must be a nonempty proper subset");
    std::vector<int> k = keep;
    std::sort(k.begin(), k.end());
    if (std::unique(k.begin(), k.end()) != k.end())
        throw BadSubset("partial_trace: duplicate qubit index");
    if (k.front() < 0 || k.back() >= n)
        throw BadSubset("partial_trace: qubit index out of range");

    // split each basis index into (kept bits, traced bits); qubit 0 is the
    // most significant bit
    std::vector<int> kept_shift, traced_shift;
    std::vector<bool> is_kept(n, false);
    for (int q : k) is_kept[q] = true;
    for (int q = 0; q < n; ++q) {
        const int shift = n - 1 - q;
        (is_kept[q] ? kept_shift : traced_shift).push_back(shift);
    }

    const std::size_t dim_a = std::size_t{1} << kept_shift.size();
    const std::size_t dim_b = std::size_t{1} << traced_shift.size();

    // amplitude matrix M[row=kept, col=traced]; rho_A = M M^dagger
    std::vector<Complex> m(dim_a * dim_b, Complex{0.0, 0.0});
    for (std::size_t idx = 0; idx < state.amplitudes.size(); ++idx) {
        std::size_t row = 0, col = 0;
        for (std::size_t b = 0; b < kept_shift.size(); ++b)
            row = (row << 1) | ((idx >> kept_shift[b]) & 1u);
        for (std::size_t b = 0; b < traced_shift.size(); ++b)
            col = (col << 1) | ((idx >> traced_shift[b]) & 1u);
        m[row * dim_b + col] = state.amplitudes[idx];
    }

    DensityMatrix rho;
    rho.dim = dim_a;
    rho.data.assign(dim_a * dim_a, Complex{0.0, 0.0});
    for (std::size_t i = 0; i < dim_a; ++i)
        for (std::size_t j = 0; j < dim_a; ++j) {
            Complex s = 0.0;
            for (std::size_t c = 0; c < dim_b; ++c)
                s += m[i * dim_b + c] * std::conj(m[j * dim_b + c]);
            rho.at(i, j) = s;
        }
    return rho;
}

double gme_pure(const PureState& state) {
    state.validate();
    const int n = state.n_qubits;
    if (n < 2) throw InvalidState("gme_pure: need at least 2 qubits");
    if (n > kMaxQubitsExhaustive) {
        char buf[96];
        std::snprintf(buf, sizeof(buf),
                      "gme_pure: exhaustive bipartitions limited to %d qubits (got %d)",
                      kMaxQubitsExhaustive, n);
        throw TooManyQubits(buf);
    }

    // purity is bipartition-symmetric, so |A| <= floor(N/2) covers all splits
    double min_e = std::numeric_limits<double>::infinity();
    const unsigned full = (1u << n) - 1u;
    for (unsigned mask = 1; mask < full; ++mask) {
        const int size = std::popcount(mask);
        if (size > n / 2) continue;
        std::vector<int> keep;
        for (int q = 0; q < n; ++q)
            if (mask & (1u << q)) keep.push_back(q);
        const DensityMatrix rho = partial_trace(state, keep);
        double purity = 0.0;
        for (const Complex& c : rho.data) purity += std::norm(c);
        const double e = std::sqrt(2.0 * std::max(0.0, 1.0 - purity));
        min_e = std::min(min_e, e);
    }
    return min_e;
}

} // namespace udw
