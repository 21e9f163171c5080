#pragma once

#include <span>
#include <utility>
#include <vector>

#include "udw/gme.hpp"
#include "udw/response.hpp"

namespace udw {

/// One GHZ-like evolution case: N detectors start in
/// alpha|g...g> + beta|e...e> and n of them accelerate uniformly.
struct Scenario {
    int n_total = 3;
    int n_accel = 1;
    double alpha = 0.70710678118654752440; // 1/sqrt(2)

    double beta() const;
    /// alpha in {0, 1} is a product state with E = 0; allowed but reported
    /// as degenerate.
    bool degenerate() const { return alpha == 0.0 || alpha == 1.0; }
    void validate() const;
};

/// Three-detector X state after one detector accelerates (the other two stay
/// inertial). Populates pairs 1 and 2; pairs 3, 4 are empty.
XState evolved_state_one(double alpha, const ResponseAmplitudes& resp);

/// Three-detector X state after two detectors accelerate with the same a.
/// All four pairs populated.
XState evolved_state_two(double alpha, const ResponseAmplitudes& resp);

/// Closed-form N-partite entanglement for n accelerated detectors,
///   E = max{0, 2 a b [1 - sum_{b=1}^n C(n,b) u^b] / D,
///              2 a b [u^n - 1 - sum_{b=1}^{n-1} C(n,b) u^b] / D},
/// u = |eta0||eta1|, D = (1+|eta0|^2)^{n/2} (1+|eta1|^2)^{n/2}.
/// Independent of n_total. Binomials use the multiplicative recurrence and
/// are limited to n <= 64 (BinomialRangeError beyond).
double entanglement_closed(const Scenario& scenario, const ResponseAmplitudes& resp);

/// Same with magnitudes passed directly (grid sweeps, tests).
double entanglement_closed(int n_accel, double eta0_abs, double eta1_abs, double alpha);

/// Slope sign of one maximal monotone run of a curve.
struct MonotoneSegment {
    double a_begin = 0.0;
    double a_end = 0.0;
    int direction = 0; // +1 rising, -1 falling, 0 flat
};

struct PhenomenaReport {
    bool esb = false;        // zero at the smallest a, above threshold later
    double birth_a = 0.0;    // first grid a with E > threshold (valid when esb)
    std::vector<std::size_t> peak_indices; // interior strict local maxima
    std::vector<MonotoneSegment> segments;
};

/// Scan an (a, E) curve (sorted by a, at least 3 points) for entanglement
/// sudden birth, peaks, and monotone runs. Throws CurveTooShort.
PhenomenaReport detect_phenomena(std::span<const std::pair<double, double>> curve,
                                 double threshold = 1e-6);

} // namespace udw
