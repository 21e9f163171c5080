#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "udw/errors.hpp"

namespace udw {

using Complex = std::complex<double>;

/// N-qubit X state: nonzero entries only on the main diagonal and the
/// anti-diagonal of the natural-basis density matrix. Pair i (1-based)
/// couples row i-1 with row 2^N-i: a_i and b_i on the diagonal, z_i on the
/// anti-diagonal. n = 2^{N-1} pairs.
struct XState {
    int n_qubits = 0;
    std::vector<double> a_diag;   // a_1..a_n (upper half of the diagonal)
    std::vector<double> b_diag;   // b_1..b_n (lower half, b_1 in the corner)
    std::vector<Complex> z_anti;  // z_1..z_n

    std::size_t pairs() const { return a_diag.size(); }
    void validate() const; // throws InvalidState
};

/// Pure N-qubit state, amplitudes in natural basis order |0...0> .. |1...1>.
/// Qubit 0 is the most significant bit of the basis index.
struct PureState {
    int n_qubits = 0;
    std::vector<Complex> amplitudes;

    void validate() const; // throws InvalidState
};

/// Dense density matrix over a subset of qubits (row-major).
struct DensityMatrix {
    std::size_t dim = 0;
    std::vector<Complex> data;

    Complex& at(std::size_t i, std::size_t j) { return data[i * dim + j]; }
    const Complex& at(std::size_t i, std::size_t j) const { return data[i * dim + j]; }
};

/// Closed-form genuine multipartite entanglement of an X state:
/// E = 2 max(0, max_i(|z_i| - nu_i)), nu_i = sum_{j != i} sqrt(a_j b_j).
double gme_xstate(const XState& state);

/// Relabel |g> <-> |e> on every qubit. With pair i spanning rows (i-1, 2^N-i)
/// the global flip maps each pair onto itself, so a and b swap in place and z
/// conjugates. Entanglement is unchanged.
XState basis_swap(const XState& state);

/// Reduced density matrix over `keep` (indices into 0..N-1, any order).
/// Throws BadSubset if keep is empty or the full set.
DensityMatrix partial_trace(const PureState& state, const std::vector<int>& keep);

/// Brute-force pure-state entanglement: min over all bipartitions A|B of
/// sqrt(2 (1 - Tr rho_A^2)). Exhaustive up to 14 qubits.
double gme_pure(const PureState& state);

} // namespace udw
