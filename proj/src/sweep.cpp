#include "udw/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <thread>

namespace udw {
namespace {

constexpr double kFlatSlope = 1e-10;

int slope_sign(double num, double den) {
    const double s = num / den;
    if (std::abs(s) < kFlatSlope) return 0;
    return s > 0.0 ? 1 : -1;
}

[[noreturn]] void rethrow_tagged(std::exception_ptr ep, double a) {
    char tag[48];
    std::snprintf(tag, sizeof(tag), "sweep point a=%.17g: ", a);
    try {
        std::rethrow_exception(ep);
    } catch (const QuadratureNonConvergence& e) {
        throw QuadratureNonConvergence(tag + std::string(e.what()));
    } catch (const ModeSumNonConvergence& e) {
        throw ModeSumNonConvergence(tag + std::string(e.what()));
    } catch (const ValidationError& e) {
        throw ValidationError(tag + std::string(e.what()));
    } catch (const Error& e) {
        throw Error(tag + std::string(e.what()));
    }
}

} // namespace

void SweepSpec::validate() const {
    base.validate();
    scenario.validate();
    if (a_grid.empty()) throw ValidationError("SweepSpec: empty a grid");
    for (std::size_t i = 0; i < a_grid.size(); ++i) {
        if (!(a_grid[i] >= 0.0)) throw ValidationError("SweepSpec: grid values must be >= 0");
        if (i > 0 && !(a_grid[i] > a_grid[i - 1]))
            throw ValidationError("SweepSpec: grid must be strictly increasing");
    }
    if (!(fd_step > 0.0 && fd_step <= 1.0))
        throw ValidationError("SweepSpec: fd_step must lie in (0, 1]");
    if (workers < 1) throw ValidationError("SweepSpec: workers must be >= 1");
}

std::string regime_label(const SweepRecord& rec) {
    const char* p = rec.dp_sign > 0 ? "Unruh" : (rec.dp_sign < 0 ? "antiUnruh" : "flat");
    const char* e = rec.de_sign > 0 ? "E_up" : (rec.de_sign < 0 ? "E_down" : "E_flat");
    return std::string(p) + ":" + e;
}

std::vector<SweepRecord> run_sweep(const SweepSpec& spec) {
    spec.validate();
    const std::size_t npts = spec.a_grid.size();
    std::vector<SweepRecord> records(npts);
    std::vector<std::exception_ptr> failures(npts);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};

    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= npts || failed.load()) return;
            try {
                DetectorParams p = spec.base;
                p.a = spec.a_grid[i];
                const ResponseAmplitudes resp = response_amplitudes(p);
                SweepRecord& r = records[i];
                r.a = spec.a_grid[i];
                r.p = resp.p;
                r.eta0_abs = std::abs(resp.eta0);
                r.eta1_abs = std::abs(resp.eta1);
                r.e = entanglement_closed(spec.scenario.n_accel, r.eta0_abs,
                                          r.eta1_abs, spec.scenario.alpha);
            } catch (...) {
                failures[i] = std::current_exception();
                failed.store(true);
            }
        }
    };

    const int nthreads = std::min<std::size_t>(std::max(spec.workers, 1), npts);
    if (nthreads <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    for (std::size_t i = 0; i < npts; ++i)
        if (failures[i]) rethrow_tagged(failures[i], spec.a_grid[i]);

    // grid-difference slope signs; single-point grids stay flat
    for (std::size_t i = 0; i < npts && npts > 1; ++i) {
        const std::size_t lo = (i == 0) ? 0 : i - 1;
        const std::size_t hi = (i + 1 == npts) ? i : i + 1;
        const double da = spec.a_grid[hi] - spec.a_grid[lo];
        records[i].dp_sign = slope_sign(records[hi].p - records[lo].p, da);
        records[i].de_sign = slope_sign(records[hi].e - records[lo].e, da);
    }
    return records;
}

int RegimeSummary::distinct_combinations() const {
    int n = 0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (!intervals[i][j].empty()) ++n;
    return n;
}

RegimeSummary classify_regimes(const std::vector<SweepRecord>& records) {
    if (records.size() < 2)
        throw ValidationError("classify_regimes: need at least 2 records");
    RegimeSummary summary;
    int cur_i = -1, cur_j = -1;
    for (const SweepRecord& r : records) {
        if (r.dp_sign == 0 || r.de_sign == 0) {
            cur_i = cur_j = -1;
            continue;
        }
        const int i = r.dp_sign > 0 ? 1 : 0;
        const int j = r.de_sign > 0 ? 1 : 0;
        auto& list = summary.intervals[i][j];
        if (i == cur_i && j == cur_j) {
            list.back().a_end = r.a;
        } else {
            list.push_back({r.a, r.a});
            cur_i = i;
            cur_j = j;
        }
    }
    return summary;
}

} // namespace udw
