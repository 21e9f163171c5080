#pragma once

#include <string>
#include <vector>

#include "udw/params.hpp"
#include "udw/scenarios.hpp"

namespace udw {

/// One acceleration grid to evaluate. `base.a` is ignored; each grid value
/// replaces it. `workers` is a parallelism request only; results are
/// identical for any value.
struct SweepSpec {
    DetectorParams base;
    std::vector<double> a_grid;  // strictly increasing, all >= 0
    Scenario scenario;
    double fd_step = 1.0;        // in (0, 1], kept for slope-step configuration
    int workers = 1;

    void validate() const;
};

/// One grid point. Slope signs come from grid differences (central in the
/// interior, one-sided at the ends); |slope| < 1e-10 counts as flat.
/// dp_sign = +1 is the Unruh direction (P grows with a), -1 anti-Unruh.
struct SweepRecord {
    double a = 0.0;
    double p = 0.0;
    double e = 0.0;
    double eta0_abs = 0.0;
    double eta1_abs = 0.0;
    int dp_sign = 0;
    int de_sign = 0;
};

/// "Unruh:E_up", "antiUnruh:E_down", "flat:E_flat", ...
std::string regime_label(const SweepRecord& rec);

std::vector<SweepRecord> run_sweep(const SweepSpec& spec);

/// Where each of the four (Unruh/antiUnruh x E_up/E_down) combinations holds.
struct RegimeSummary {
    struct Interval {
        double a_begin = 0.0;
        double a_end = 0.0;
    };
    // indexed [dp_sign > 0][de_sign > 0]
    std::vector<Interval> intervals[2][2];

    bool observed(bool unruh, bool e_up) const {
        return !intervals[unruh ? 1 : 0][e_up ? 1 : 0].empty();
    }
    int distinct_combinations() const;
};

RegimeSummary classify_regimes(const std::vector<SweepRecord>& records);

} // namespace udw
