#include "udw/scenarios.hpp"

#include <cmath>
#include <cstdio>

namespace udw {
namespace {

constexpr double kEsbZero = 1e-12;
constexpr int kBinomialMaxN = 64;

} // namespace

double Scenario::beta() const { return std::sqrt(std::max(0.0, 1.0 - alpha * alpha)); }

void Scenario::validate() const {
    if (n_total < 3) throw ValidationError("Scenario: n_total must be >= 3");
    if (n_accel < 1 || n_accel >= n_total)
        throw ValidationError("Scenario: need 1 <= n_accel < n_total");
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw ValidationError("Scenario: alpha must lie in [0, 1]");
}

// Natural-basis layout for three detectors, |g_A g_B g_C> .. |e_A e_B e_C>:
// pair 1 couples rows (0, 7), pair 2 rows (1, 6), pair 3 rows (2, 5),
// pair 4 rows (3, 4).

XState evolved_state_one(double alpha, const ResponseAmplitudes& resp) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw ValidationError("evolved_state_one: alpha must lie in [0, 1]");
    const double beta = std::sqrt(std::max(0.0, 1.0 - alpha * alpha));
    const double h0 = std::norm(resp.eta0);
    const double h1 = std::norm(resp.eta1);
    const double d0 = 1.0 + h0;
    const double d1 = 1.0 + h1;
    const double root = std::sqrt(d0 * d1);

    XState s;
    s.n_qubits = 3;
    s.a_diag = {alpha * alpha / d0, alpha * alpha * h0 / d0, 0.0, 0.0};
    s.b_diag = {beta * beta / d1, beta * beta * h1 / d1, 0.0, 0.0};
    s.z_anti = {Complex{alpha * beta / root, 0.0},
                -alpha * beta * resp.eta0 * std::conj(resp.eta1) / root,
                Complex{0.0, 0.0}, Complex{0.0, 0.0}};
    return s;
}

XState evolved_state_two(double alpha, const ResponseAmplitudes& resp) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw ValidationError("evolved_state_two: alpha must lie in [0, 1]");
    const double beta = std::sqrt(std::max(0.0, 1.0 - alpha * alpha));
    const double h0 = std::norm(resp.eta0);
    const double h1 = std::norm(resp.eta1);
    const double d0 = (1.0 + h0) * (1.0 + h0);
    const double d1 = (1.0 + h1) * (1.0 + h1);
    const double dz = (1.0 + h0) * (1.0 + h1);
    const Complex cross = resp.eta0 * std::conj(resp.eta1);

    XState s;
    s.n_qubits = 3;
    s.a_diag = {alpha * alpha / d0, alpha * alpha * h0 / d0,
                alpha * alpha * h0 / d0, alpha * alpha * h0 * h0 / d0};
    s.b_diag = {beta * beta / d1, beta * beta * h1 / d1,
                beta * beta * h1 / d1, beta * beta * h1 * h1 / d1};
    s.z_anti = {Complex{alpha * beta / dz, 0.0},
                -alpha * beta * cross / dz,
                -alpha * beta * cross / dz,
                alpha * beta * cross * cross / dz};
    return s;
}

double entanglement_closed(int n_accel, double eta0_abs, double eta1_abs, double alpha) {
    if (n_accel < 1) throw ValidationError("entanglement_closed: n_accel must be >= 1");
    if (n_accel > kBinomialMaxN) {
        char buf[96];
        std::snprintf(buf, sizeof(buf),
                      "entanglement_closed: binomial recurrence limited to n <= %d (got %d)",
                      kBinomialMaxN, n_accel);
        throw BinomialRangeError(buf);
    }
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw ValidationError("entanglement_closed: alpha must lie in [0, 1]");

    const double beta = std::sqrt(std::max(0.0, 1.0 - alpha * alpha));
    const double u = eta0_abs * eta1_abs;
    const int n = n_accel;

    // sum_{b=1}^{n} C(n,b) u^b, C via the multiplicative recurrence
    double full_sum = 0.0, partial_sum = 0.0; // partial excludes b = n
    double binom = 1.0, upow = 1.0;
    for (int b = 1; b <= n; ++b) {
        binom *= static_cast<double>(n - b + 1) / static_cast<double>(b);
        upow *= u;
        full_sum += binom * upow;
        if (b < n) partial_sum += binom * upow;
    }
    const double u_n = upow; // u^n

    const double denom = std::pow(1.0 + eta0_abs * eta0_abs, n / 2.0) *
                         std::pow(1.0 + eta1_abs * eta1_abs, n / 2.0);
    const double pre = 2.0 * alpha * beta / denom;
    const double branch1 = pre * (1.0 - full_sum);
    const double branch2 = pre * (u_n - 1.0 - partial_sum);
    return std::max(0.0, std::max(branch1, branch2));
}

double entanglement_closed(const Scenario& scenario, const ResponseAmplitudes& resp) {
    scenario.validate();
    return entanglement_closed(scenario.n_accel, std::abs(resp.eta0),
                               std::abs(resp.eta1), scenario.alpha);
}

PhenomenaReport detect_phenomena(std::span<const std::pair<double, double>> curve,
                                 double threshold) {
    if (curve.size() < 3)
        throw CurveTooShort("detect_phenomena: need at least 3 points");
    for (std::size_t i = 0; i + 1 < curve.size(); ++i)
        if (!(curve[i].first < curve[i + 1].first))
            throw ValidationError("detect_phenomena: curve must be sorted by a");

    PhenomenaReport rep;
    if (curve.front().second <= kEsbZero) {
        for (const auto& [a, e] : curve) {
            if (e > threshold) {
                rep.esb = true;
                rep.birth_a = a;
                break;
            }
        }
    }

    for (std::size_t i = 1; i + 1 < curve.size(); ++i)
        if (curve[i].second > curve[i - 1].second && curve[i].second > curve[i + 1].second)
            rep.peak_indices.push_back(i);

    auto step_dir = [&](std::size_t i) {
        const double d = curve[i + 1].second - curve[i].second;
        return d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
    };
    MonotoneSegment seg{curve[0].first, curve[1].first, step_dir(0)};
    for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
        const int dir = step_dir(i);
        if (dir == seg.direction) {
            seg.a_end = curve[i + 1].first;
        } else {
            rep.segments.push_back(seg);
            seg = {curve[i].first, curve[i + 1].first, dir};
        }
    }
    rep.segments.push_back(seg);
    return rep;
}

} // namespace udw
