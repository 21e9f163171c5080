#pragma once

#include "udw/errors.hpp"

namespace udw {

/// All physical and numerical inputs for one detector/cavity setup.
/// Natural units (c = hbar = 1); lengths and times share the inverse
/// unit of the energy gap.
struct DetectorParams {
    double a = 0.0;              // proper acceleration, >= 0
    double omega = 1.0;          // detector energy gap, > 0
    double sigma = 0.4;          // interaction timescale of the Gaussian switching
    double cavity_length = 200.0;// cavity length L
    double coupling = 0.1;       // coupling strength lambda

    // numerical cutoffs
    double tau_window = 10.0;    // integrate tau over [-c*sigma, c*sigma], c >= 4
    int mode_cap = 5000;         // maximum |m| before the mode sum gives up
    double mode_tol = 1e-10;     // relative tail tolerance for mode-sum truncation
    double quad_tol = 1e-9;      // target relative quadrature error
    double a_eps = 1e-8;         // below this, the a->0 analytic branch is used

    void validate() const {
        if (!(a >= 0.0)) throw ValidationError("DetectorParams: a must be >= 0");
        if (!(omega > 0.0)) throw ValidationError("DetectorParams: omega must be > 0");
        if (!(sigma > 0.0)) throw ValidationError("DetectorParams: sigma must be > 0");
        if (!(cavity_length > 0.0)) throw ValidationError("DetectorParams: L must be > 0");
        if (!(coupling > 0.0)) throw ValidationError("DetectorParams: lambda must be > 0");
        if (!(tau_window >= 4.0)) throw ValidationError("DetectorParams: tau_window must be >= 4");
        if (mode_cap < 1) throw ValidationError("DetectorParams: mode_cap must be >= 1");
        if (!(mode_tol > 0.0)) throw ValidationError("DetectorParams: mode_tol must be > 0");
        if (!(quad_tol > 0.0)) throw ValidationError("DetectorParams: quad_tol must be > 0");
        if (!(a_eps >= 0.0)) throw ValidationError("DetectorParams: a_eps must be >= 0");
    }
};

} // namespace udw
