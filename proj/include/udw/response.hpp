#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "udw/params.hpp"

namespace udw {

using Complex = std::complex<double>;

enum class FreqSign { plus, minus }; // the +/- in I_{+/-,m}

/// One mode's pair of oscillatory integrals.
struct ModeAmplitude {
    int m = 0;          // nonzero signed mode index (m = 0 is excluded, IR cutoff)
    Complex i_plus;     // I_{+,m}
    Complex i_minus;    // I_{-,m}
};

/// First-order response at one parameter point.
struct ResponseAmplitudes {
    Complex eta0;       // lambda * sum_m I_{+,m}   (excitation amplitude)
    Complex eta1;       // lambda * sum_m I_{-,m}   (de-excitation amplitude)
    double p = 0.0;     // lambda^2 * sum_{m!=0} |I_{+,m}|^2
    int modes_used = 0; // number of signed modes summed before truncation
};

/// Response plus the per-mode values it was built from.
struct ResponseDetail {
    ResponseAmplitudes amps;
    std::vector<ModeAmplitude> modes; // in summation order: +1, -1, +2, -2, ...
};

/// Hyperbolic worldline t = sinh(a tau)/a, x = (cosh(a tau) - 1)/a.
/// For a below a_eps the series limit (tau, a tau^2/2) is used, which avoids
/// the 0/0 at a = 0.
std::pair<double, double> trajectory(double a, double tau, double a_eps = 1e-8);

/// Gaussian switching exp(-tau^2 / (2 sigma^2)).
double switching(double tau, double sigma);

/// The mode integral I_{s,m} over tau in [-c sigma, c sigma].
/// Throws QuadratureNonConvergence if panel refinement does not settle.
Complex mode_integral(const DetectorParams& params, int m, FreqSign sign);

/// Mode-summed amplitudes eta0, eta1 and transition probability P.
/// Modes are added in (+|m|, -|m|) pairs outward; the sum stops once five
/// consecutive pairs each contribute less than mode_tol relative to the
/// running |eta| and P sums. Throws ModeSumNonConvergence if mode_cap is
/// reached first.
ResponseAmplitudes response_amplitudes(const DetectorParams& params);

/// Same, also returning every ModeAmplitude that entered the sums.
ResponseDetail response_amplitudes_detailed(const DetectorParams& params);

/// Analytic a = 0 value: the Gaussian Fourier transform
///   I_{s,m}(a=0) = sigma sqrt(2 pi) exp(-sigma^2 (s Omega + 2 pi |m|/L)^2 / 2) / sqrt(4 pi |m|).
double mode_integral_inertial(const DetectorParams& params, int m, FreqSign sign);

/// Upper bound |I_{s,m}| <= sigma sqrt(2 pi) / sqrt(4 pi |m|) (unit-modulus phase).
double mode_integral_bound(const DetectorParams& params, int m);

} // namespace udw
