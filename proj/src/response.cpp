#include "udw/response.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

// The mode integral
//
//   I_{s,m} = int_{-T}^{T} chi(tau/sigma) e^{i s Omega tau}
//             e^{i (2 pi / L)(|m| t(tau) - m x(tau))} dtau / sqrt(4 pi |m|),
//   T = tau_window * sigma,
//
// with the hyperbolic trajectory reduces, for m = -mu (mu > 0), to
//
//   G(s, mu) = int chi e^{i [s Omega tau + kappa (e^{a tau} - 1)/a]} dtau,
//   kappa = 2 pi mu / L,
//
// and for m = +mu to conj(G(s, mu)) (substitute tau -> -tau; chi is even).
// The instantaneous phase rate kappa e^{a tau} grows exponentially toward
// tau = +T, which makes a fixed panel density hopeless at large a sigma.
// Strategy:
//   * core [-T, tau_w]: composite 8-point Gauss-Legendre panels whose widths
//     track the local rate Omega + kappa e^{a tau} (at least 9 panels per
//     local period, and at least 2 panels per sigma for the window), plus a
//     panel-doubling loop until successive results agree to quad_tol;
//   * wing [tau_w, T]: repeated integration by parts against e^{i phi},
//       int A e^{i phi} = sum_k (-1)^{k-1} i^{-k} [v_k e^{i phi}],
//       v_1 = A/phi', v_{k+1} = v_k'/phi',
//     evaluated from truncated Taylor expansions of A and phi' at the wing
//     edges. Valid because phi' is positive and increasing and A decreasing
//     there; tau_w is the smallest grid candidate where the series decays
//     below the wing error budget.

namespace udw {
namespace {

constexpr double kPi = 3.14159265358979323846;

// 8-point Gauss-Legendre rule on [-1, 1]
constexpr int kGlOrder = 8;
constexpr double kGlNode[kGlOrder] = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
    -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
    0.7966664774136267,  0.9602898564975363};
constexpr double kGlWeight[kGlOrder] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
    0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
    0.2223810344533745, 0.1012285362903763};

constexpr int kTailPairs = 5;       // consecutive quiet pairs ending the mode sum
constexpr int kMaxRefineLevels = 10;
constexpr long kPanelCap = 2'000'000;
constexpr int kWingOrderMax = 16;
constexpr int kWingCandidates = 64;

// (e^{a tau} - 1)/a, finite and accurate down to a = 0
double expm1_over(double a, double tau) {
    const double x = a * tau;
    if (std::abs(x) < 1e-5)
        return tau * (1.0 + x * (0.5 + x * (1.0 / 6.0 + x / 24.0)));
    return std::expm1(x) / a;
}

double clamped_exp(double x) { return std::exp(std::min(x, 700.0)); }

// ---- truncated Taylor series (jets) for the wing expansion ----------------

struct Jet {
    static constexpr int kCap = kWingOrderMax + 4;
    int len = 0;
    double c[kCap] = {};
};

// exp(-t^2/(2 sigma^2)) expanded at t0; A' = -((t0+x)/sigma^2) A
Jet jet_window(double t0, double sigma, int len) {
    Jet j;
    j.len = len;
    j.c[0] = std::exp(-t0 * t0 / (2.0 * sigma * sigma));
    const double inv_s2 = 1.0 / (sigma * sigma);
    for (int k = 0; k + 1 < len; ++k) {
        const double prev = (k > 0) ? j.c[k - 1] : 0.0;
        j.c[k + 1] = -inv_s2 * (t0 * j.c[k] + prev) / static_cast<double>(k + 1);
    }
    return j;
}

// q Omega + kappa e^{a t} expanded at t0
Jet jet_phase_rate(double t0, double q_omega, double kappa, double a, int len) {
    Jet j;
    j.len = len;
    const double e0 = kappa * clamped_exp(a * t0);
    j.c[0] = q_omega + e0;
    double term = e0;
    for (int k = 1; k < len; ++k) {
        term *= a / static_cast<double>(k);
        j.c[k] = term;
    }
    return j;
}

Jet jet_differentiate(const Jet& u) {
    Jet j;
    j.len = std::max(u.len - 1, 0);
    for (int k = 0; k < j.len; ++k) j.c[k] = u.c[k + 1] * static_cast<double>(k + 1);
    return j;
}

Jet jet_divide(const Jet& u, const Jet& v) {
    Jet j;
    j.len = std::min(u.len, v.len);
    for (int k = 0; k < j.len; ++k) {
        double s = u.c[k];
        for (int i = 0; i < k; ++i) s -= j.c[i] * v.c[k - i];
        j.c[k] = s / v.c[0];
    }
    return j;
}

// v_k(t0) for k = 1..k_max, or empty on numeric trouble
bool wing_coefficients(double t0, double sigma, double q_omega, double kappa,
                       double a, int k_max, double* out) {
    const int len0 = k_max + 3;
    const Jet p = jet_phase_rate(t0, q_omega, kappa, a, len0);
    if (!std::isfinite(p.c[0]) || p.c[0] <= 0.0) return false;
    Jet v = jet_divide(jet_window(t0, sigma, len0), p);
    for (int k = 1; k <= k_max; ++k) {
        out[k - 1] = v.c[0];
        if (!std::isfinite(v.c[0])) return false;
        v = jet_divide(jet_differentiate(v), p);
    }
    return true;
}

#if defined(__GLIBC__)
Complex cis(double x) {
    double s, c;
    ::sincos(x, &s, &c);
    return {c, s};
}
#else
Complex cis(double x) { return {std::cos(x), std::sin(x)}; }
#endif

// i^{-k} for k >= 1
Complex inv_i_pow(int k) {
    switch (k & 3) {
        case 1: return {0.0, -1.0};
        case 2: return {-1.0, 0.0};
        case 3: return {0.0, 1.0};
        default: return {1.0, 0.0};
    }
}

struct WingEval {
    bool ok = false;
    int order = 0;
    Complex value;          // signed contribution of [tau_w, T] to the raw integral
};

// phi_q(tau) = q Omega tau + kappa (e^{a tau}-1)/a
double phase_at(double tau, double q_omega, double kappa, double a) {
    return q_omega * tau + kappa * expm1_over(a, tau);
}

// Remainder after truncating at `order`: |int v_{order+1} p e^{i phi}| is
// bounded by sampling |v_{order+1} p| along the wing (it cannot be read off
// at tau_w alone; the window derivatives vanish at tau = 0 and the sample
// ladder must cover the window peak when tau_w is negative).
double wing_remainder_bound(double tau_w, double T, double sigma, double q_omega,
                            double kappa, double a, int order) {
    double tmp[kWingOrderMax + 2];
    double gmax = 0.0;
    for (int j = 0; j <= 12; ++j) {
        const double tj = std::min(tau_w + j * sigma / 2.0, T);
        if (!wing_coefficients(tj, sigma, q_omega, kappa, a, order + 1, tmp))
            return std::numeric_limits<double>::infinity();
        const double pj = q_omega + kappa * clamped_exp(a * tj);
        gmax = std::max(gmax, std::abs(tmp[order]) * pj);
        if (tj >= T) break;
    }
    return 3.0 * gmax * std::min(T - tau_w, 6.0 * sigma);
}

// Boundary-term series for int_{tau_w}^{T} chi e^{i phi_q}; eps is the
// acceptable remainder estimate on the raw-integral scale.
WingEval eval_wing(double tau_w, double T, double sigma, double q_omega,
                   double kappa, double a, double eps) {
    WingEval w;
    double v_lo[kWingOrderMax + 1];
    if (!wing_coefficients(tau_w, sigma, q_omega, kappa, a, kWingOrderMax + 1, v_lo))
        return w;

    const double p0 = q_omega + kappa * clamped_exp(a * tau_w);
    const double w_eff = std::min(T - tau_w, sigma);
    // cheap local screen first; the sampled wing-wide bound only for orders
    // that survive it (two attempts -- if the bound rejects twice here, a
    // larger tau_w is the better move)
    int order = 0;
    int ladder_tries = 0;
    for (int k = 1; k <= kWingOrderMax && ladder_tries < 2; ++k) {
        const double next = std::abs(v_lo[k]); // |v_{k+1}|
        const bool decaying = next <= 0.5 * std::abs(v_lo[k - 1]) || next == 0.0;
        if (next * p0 * w_eff <= eps && decaying) {
            ++ladder_tries;
            if (wing_remainder_bound(tau_w, T, sigma, q_omega, kappa, a, k) <= eps) {
                order = k;
                break;
            }
        }
    }
    if (order == 0) return w;

    // upper end: terms carry A(T)/p^k; drop them if the phase rate overflowed
    // (they vanish in that limit)
    double v_hi[kWingOrderMax + 1] = {};
    bool have_hi = false;
    const double field_hi = kappa * expm1_over(a, T);
    if (std::isfinite(kappa * clamped_exp(a * T)) && std::isfinite(field_hi) &&
        a * T < 690.0)
        have_hi = wing_coefficients(T, sigma, q_omega, kappa, a, order, v_hi);

    const Complex e_lo = cis(phase_at(tau_w, q_omega, kappa, a));
    const Complex e_hi = have_hi ? cis(q_omega * T + field_hi) : Complex{0.0, 0.0};
    Complex sum = 0.0;
    double sgn = 1.0;
    for (int k = 1; k <= order; ++k) {
        const Complex bracket = (have_hi ? v_hi[k - 1] * e_hi : Complex{0.0, 0.0})
                                - v_lo[k - 1] * e_lo;
        sum += sgn * inv_i_pow(k) * bracket;
        sgn = -sgn;
    }
    w.ok = true;
    w.order = order;
    w.value = sum;
    return w;
}

// ---- core panel layout and evaluation --------------------------------------

double local_rate(double tau, double omega, double kappa, double a) {
    return omega + kappa * clamped_exp(a * tau);
}

std::vector<double> march_panels(double T, double tau_w, double sigma,
                                 double omega, double kappa, double a, int mu) {
    std::vector<double> edges;
    edges.push_back(-T);
    double tau = -T;
    const double span = tau_w + T;
    const double h_min = span / static_cast<double>(kPanelCap);
    while (tau < tau_w) {
        double h = std::min(sigma / 2.0, 2.0 * kPi / (9.0 * local_rate(tau, omega, kappa, a)));
        // the rate grows to the right; re-clamp against the panel's far edge
        for (int pass = 0; pass < 2; ++pass) {
            const double far = std::min(tau + h, tau_w);
            h = std::min(h, 2.0 * kPi / (9.0 * local_rate(far, omega, kappa, a)));
        }
        if (!(h > h_min)) {
            char buf[160];
            std::snprintf(buf, sizeof(buf),
                          "mode integral m=%d: panel budget exhausted "
                          "(oscillation rate too high for tau window)", mu);
            throw QuadratureNonConvergence(buf);
        }
        tau = (tau + h >= tau_w) ? tau_w : tau + h;
        edges.push_back(tau);
    }
    return edges;
}

struct RawPair {
    Complex plus;   // q = +1
    Complex minus;  // q = -1
};

RawPair eval_panel(double lo, double hi, double sigma, double omega, double kappa,
                   double a) {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double inv_2s2 = 1.0 / (2.0 * sigma * sigma);
    Complex pp = 0.0, pm = 0.0;
    for (int j = 0; j < kGlOrder; ++j) {
        const double tau = mid + half * kGlNode[j];
        const double chi = std::exp(-tau * tau * inv_2s2);
        const Complex field = cis(kappa * expm1_over(a, tau));
        const Complex det = cis(omega * tau);
        const double w = kGlWeight[j] * chi;
        pp += w * (field * det);
        pm += w * (field * std::conj(det));
    }
    return {half * pp, half * pm};
}

// one refinement level: every base panel split into 2^level equal parts
RawPair eval_core(const std::vector<double>& edges, int level, double sigma,
                  double omega, double kappa, double a) {
    const int splits = 1 << level;
    Complex acc_p = 0.0, acc_m = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double w0 = edges[i];
        const double dw = (edges[i + 1] - edges[i]) / splits;
        for (int s = 0; s < splits; ++s) {
            const RawPair r = eval_panel(w0 + s * dw, w0 + (s + 1) * dw, sigma,
                                         omega, kappa, a);
            acc_p += r.plus;
            acc_m += r.minus;
        }
    }
    return {acc_p, acc_m};
}

// comparator grid: adjacent base panels merged pairwise (half the density)
RawPair eval_core_merged(const std::vector<double>& edges, double sigma,
                         double omega, double kappa, double a) {
    Complex acc_p = 0.0, acc_m = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); i += 2) {
        const std::size_t hi = std::min(i + 2, edges.size() - 1);
        const RawPair r = eval_panel(edges[i], edges[hi], sigma, omega, kappa, a);
        acc_p += r.plus;
        acc_m += r.minus;
    }
    return {acc_p, acc_m};
}

// G(+1, mu) and G(-1, mu), already scaled by 1/sqrt(4 pi mu).
// `wing_hint` (optional) caches the accepted wing-candidate index across a
// mode sum; the optimum drifts slowly with mu, so neighbors of the previous
// pick usually settle the search in two probes instead of a binary search.
RawPair integrate_mode(const DetectorParams& p, int mu, int* wing_hint = nullptr) {
    const double kappa = 2.0 * kPi * mu / p.cavity_length;
    const double scale = 1.0 / std::sqrt(4.0 * kPi * mu);
    const double raw_scale = p.sigma * std::sqrt(2.0 * kPi); // |raw integral| bound

    if (p.a < p.a_eps) {
        const double gp = raw_scale * std::exp(-p.sigma * p.sigma * (p.omega + kappa) * (p.omega + kappa) / 2.0);
        const double gm = raw_scale * std::exp(-p.sigma * p.sigma * (-p.omega + kappa) * (-p.omega + kappa) / 2.0);
        return {gp * scale, gm * scale};
    }

    const double T = p.tau_window * p.sigma;
    const double eps_wing = 1e-4 * p.quad_tol * raw_scale;

    // smallest wing start (candidates over the whole domain; for large kappa
    // the series already converges at negative tau) where the boundary series
    // holds for both detector-frequency signs
    struct WingChoice {
        bool ok = false;
        Complex plus, minus;
    };
    auto wing_at = [&](int c) -> WingChoice {
        const double cand = -T + 2.0 * T * static_cast<double>(c) / kWingCandidates;
        const double e0 = kappa * clamped_exp(p.a * cand);
        if (!(e0 >= 2.0 * p.omega)) return {};   // keep q=-1 rate positive with margin
        const WingEval wp = eval_wing(cand, T, p.sigma, +p.omega, kappa, p.a, eps_wing);
        if (!wp.ok) return {};
        const WingEval wm = eval_wing(cand, T, p.sigma, -p.omega, kappa, p.a, eps_wing);
        if (!wm.ok) return {};
        return {true, wp.value, wm.value};
    };

    int found = -1;
    WingChoice choice;
    if (wing_hint && *wing_hint >= 0) {
        // warm start: previous index, then its immediate neighbors
        WingChoice c0 = wing_at(*wing_hint);
        if (c0.ok) {
            found = *wing_hint;
            choice = c0;
            if (found > 0) {
                const WingChoice down = wing_at(found - 1);
                if (down.ok) {
                    --found;
                    choice = down;
                }
            }
        } else {
            for (int c = *wing_hint + 1; c <= std::min(*wing_hint + 2, kWingCandidates); ++c) {
                const WingChoice up = wing_at(c);
                if (up.ok) {
                    found = c;
                    choice = up;
                    break;
                }
            }
        }
    }
    if (found < 0) {
        int lo = 0, hi = kWingCandidates;
        while (lo <= hi) {
            const int mid = lo + (hi - lo) / 2;
            const WingChoice mc = wing_at(mid);
            if (mc.ok) {
                found = mid;
                choice = mc;
                hi = mid - 1;
            } else {
                lo = mid + 1;
            }
        }
    }
    if (wing_hint) *wing_hint = found;

    double tau_w = T;
    Complex wing_p = 0.0, wing_m = 0.0;
    if (found >= 0) {
        tau_w = -T + 2.0 * T * static_cast<double>(found) / kWingCandidates;
        wing_p = choice.plus;
        wing_m = choice.minus;
    }

    const std::vector<double> edges = march_panels(T, tau_w, p.sigma, p.omega, kappa, p.a, mu);

    // successive-grid agreement; the first comparator is the pairwise-merged
    // grid so the marched density itself is validated before any doubling
    const RawPair coarse = eval_core_merged(edges, p.sigma, p.omega, kappa, p.a);
    Complex prev_p = coarse.plus + wing_p;
    Complex prev_m = coarse.minus + wing_m;
    for (int level = 0; level <= kMaxRefineLevels; ++level) {
        const RawPair core = eval_core(edges, level, p.sigma, p.omega, kappa, p.a);
        const Complex ip = core.plus + wing_p;
        const Complex im = core.minus + wing_m;
        const double tol_p = p.quad_tol * std::max(std::abs(ip), 0.01 * raw_scale);
        const double tol_m = p.quad_tol * std::max(std::abs(im), 0.01 * raw_scale);
        if (std::abs(ip - prev_p) <= tol_p && std::abs(im - prev_m) <= tol_m)
            return {ip * scale, im * scale};
        prev_p = ip;
        prev_m = im;
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "mode integral m=%d: refinement did not reach quad_tol=%g "
                  "within %d doublings", mu, p.quad_tol, kMaxRefineLevels);
    throw QuadratureNonConvergence(buf);
}

} // namespace

std::pair<double, double> trajectory(double a, double tau, double a_eps) {
    if (!(a >= 0.0)) throw ValidationError("trajectory: a must be >= 0");
    if (a < a_eps) {
        const double u = a * tau;
        // series limits of sinh(a tau)/a and (cosh(a tau)-1)/a
        const double t = tau * (1.0 + u * u / 6.0 + u * u * u * u / 120.0);
        const double x = a * tau * tau * 0.5 * (1.0 + u * u / 12.0 + u * u * u * u / 360.0);
        return {t, x};
    }
    return {std::sinh(a * tau) / a, (std::cosh(a * tau) - 1.0) / a};
}

double switching(double tau, double sigma) {
    if (!(sigma > 0.0)) throw ValidationError("switching: sigma must be > 0");
    return std::exp(-tau * tau / (2.0 * sigma * sigma));
}

double mode_integral_inertial(const DetectorParams& params, int m, FreqSign sign) {
    params.validate();
    if (m == 0) throw ValidationError("mode_integral: m = 0 is excluded (IR cutoff)");
    const int mu = std::abs(m);
    const double kappa = 2.0 * kPi * mu / params.cavity_length;
    const double s = (sign == FreqSign::plus) ? 1.0 : -1.0;
    const double om = s * params.omega + kappa;
    return params.sigma * std::sqrt(2.0 * kPi) *
           std::exp(-params.sigma * params.sigma * om * om / 2.0) /
           std::sqrt(4.0 * kPi * mu);
}

double mode_integral_bound(const DetectorParams& params, int m) {
    if (m == 0) throw ValidationError("mode_integral_bound: m = 0 is excluded (IR cutoff)");
    return params.sigma * std::sqrt(2.0 * kPi) / std::sqrt(4.0 * kPi * std::abs(m));
}

Complex mode_integral(const DetectorParams& params, int m, FreqSign sign) {
    params.validate();
    if (m == 0) throw ValidationError("mode_integral: m = 0 is excluded (IR cutoff)");
    const RawPair g = integrate_mode(params, std::abs(m));
    const Complex v = (sign == FreqSign::plus) ? g.plus : g.minus;
    return (m < 0) ? v : std::conj(v);
}

ResponseDetail response_amplitudes_detailed(const DetectorParams& params) {
    params.validate();
    ResponseDetail out;
    Complex sum0 = 0.0, sum1 = 0.0; // eta0/lambda, eta1/lambda
    double sum_p = 0.0;             // P/lambda^2
    int quiet_pairs = 0;
    int wing_hint = -1;

    for (int mu = 1; mu <= params.mode_cap; ++mu) {
        const RawPair g = integrate_mode(params, mu, &wing_hint);
        const ModeAmplitude pos{+mu, std::conj(g.plus), std::conj(g.minus)};
        const ModeAmplitude neg{-mu, g.plus, g.minus};
        for (const ModeAmplitude* ma : {&pos, &neg}) {
            if (!std::isfinite(ma->i_plus.real()) || !std::isfinite(ma->i_plus.imag()) ||
                !std::isfinite(ma->i_minus.real()) || !std::isfinite(ma->i_minus.imag())) {
                char buf[96];
                std::snprintf(buf, sizeof(buf), "mode m=%d produced a non-finite amplitude", ma->m);
                throw QuadratureNonConvergence(buf);
            }
            sum0 += ma->i_plus;
            sum1 += ma->i_minus;
            sum_p += std::norm(ma->i_plus);
            out.modes.push_back(*ma);
        }

        const double pair0 = std::abs(pos.i_plus) + std::abs(neg.i_plus);
        const double pair1 = std::abs(pos.i_minus) + std::abs(neg.i_minus);
        const double pair_p = std::norm(pos.i_plus) + std::norm(neg.i_plus);
        constexpr double kFloor = std::numeric_limits<double>::min();
        const bool quiet =
            pair0 <= params.mode_tol * std::max(std::abs(sum0), kFloor) &&
            pair1 <= params.mode_tol * std::max(std::abs(sum1), kFloor) &&
            pair_p <= params.mode_tol * std::max(sum_p, kFloor);
        quiet_pairs = quiet ? quiet_pairs + 1 : 0;
        if (quiet_pairs >= kTailPairs) break;
    }
    if (quiet_pairs < kTailPairs) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "mode sum hit mode_cap=%d before %d consecutive pairs fell below "
                      "mode_tol=%g (a=%.6g, omega=%.6g, sigma=%.6g)",
                      params.mode_cap, kTailPairs, params.mode_tol, params.a,
                      params.omega, params.sigma);
        throw ModeSumNonConvergence(buf);
    }

    out.amps.eta0 = params.coupling * sum0;
    out.amps.eta1 = params.coupling * sum1;
    out.amps.p = params.coupling * params.coupling * sum_p;
    out.amps.modes_used = static_cast<int>(out.modes.size());
    return out;
}

ResponseAmplitudes response_amplitudes(const DetectorParams& params) {
    return response_amplitudes_detailed(params).amps;
}

} // namespace udw
