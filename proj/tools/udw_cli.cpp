#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "udw/response.hpp"
#include "udw/scenarios.hpp"
#include "udw/sweep.hpp"
#include "udw/xstate_io.hpp"

// Command-line front end. Subcommands:
//   response  -- one parameter point: a, |eta0|, |eta1|, P, modes_used
//   gme       -- X-state file -> entanglement per record
//   sweep     -- acceleration grid -> CSV records
//   figures   -- the paper-style curve families -> CSV files
// Exit codes: 0 ok, 2 validation, 3 convergence, 4 I/O.

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitConvergence = 3;
constexpr int kExitIo = 4;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

struct OutputTarget {
    std::ofstream file;
    std::ostream* os = &std::cout;

    // open before any computation so a bad path fails fast
    void open(const std::string& path) {
        if (path.empty()) return;
        file.open(path);
        if (!file) throw udw::IoError("cannot open output file: " + path);
        os = &file;
    }
};

char sep_for(const std::string& format) { return format == "tsv" ? '\t' : ','; }

// Flat "key = value" config lines ('#' comments). Values become option
// defaults before parsing, so command-line flags keep precedence.
void apply_config_file(CLI::App& app, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw udw::IoError("cannot open config file: " + path);
    std::vector<CLI::App*> scopes{&app};
    for (CLI::App* sub : app.get_subcommands(nullptr)) scopes.push_back(sub);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        const std::string text = strip(line);
        if (text.empty() || text[0] == '#') continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw udw::ValidationError(path + ": line " + std::to_string(lineno) +
                                       ": expected key = value");
        const std::string key = strip(text.substr(0, eq));
        const std::string value = strip(text.substr(eq + 1));
        bool matched = false;
        for (CLI::App* scope : scopes) {
            if (CLI::Option* opt = scope->get_option_no_throw("--" + key)) {
                try {
                    opt->default_val(value);
                } catch (const CLI::Error&) {
                    throw udw::ValidationError(path + ": line " + std::to_string(lineno) +
                                               ": bad value for " + key);
                }
                matched = true;
            }
        }
        if (!matched)
            throw udw::ValidationError(path + ": line " + std::to_string(lineno) +
                                       ": unknown key '" + key + "'");
    }
}

void add_detector_options(CLI::App* cmd, udw::DetectorParams& p, bool with_a) {
    if (with_a) cmd->add_option("--a", p.a, "proper acceleration");
    cmd->add_option("--omega", p.omega, "detector energy gap");
    cmd->add_option("--sigma", p.sigma, "interaction timescale");
    cmd->add_option("--L", p.cavity_length, "cavity length");
    cmd->add_option("--lambda", p.coupling, "coupling strength");
    cmd->add_option("--tau-window", p.tau_window, "half-width of the tau domain in units of sigma");
    cmd->add_option("--mode-cap", p.mode_cap, "maximum |m| in the mode sum");
    cmd->add_option("--mode-tol", p.mode_tol, "relative tail tolerance of the mode sum");
    cmd->add_option("--quad-tol", p.quad_tol, "relative quadrature tolerance");
    cmd->add_option("--a-eps", p.a_eps, "threshold for the analytic a->0 branch");
}

int default_workers() {
    if (const char* env = std::getenv("UDW_GME_WORKERS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

std::vector<double> linspace(double lo, double hi, int steps) {
    std::vector<double> grid(steps);
    for (int i = 0; i < steps; ++i)
        grid[i] = (steps == 1) ? lo : lo + (hi - lo) * i / (steps - 1);
    return grid;
}

void write_sweep_csv(std::ostream& os, const std::vector<udw::SweepRecord>& records,
                     char sep) {
    os << "a" << sep << "eta0_abs" << sep << "eta1_abs" << sep << "P" << sep << "E"
       << sep << "dp_sign" << sep << "de_sign" << sep << "regime" << "\n";
    for (const udw::SweepRecord& r : records) {
        os << fmt(r.a) << sep << fmt(r.eta0_abs) << sep << fmt(r.eta1_abs) << sep
           << fmt(r.p) << sep << fmt(r.e) << sep << r.dp_sign << sep << r.de_sign
           << sep << udw::regime_label(r) << "\n";
    }
}

// ---- subcommand payloads ---------------------------------------------------

struct ResponseCmd {
    udw::DetectorParams params;
    std::string output;
    std::string format = "csv";

    int run() const {
        OutputTarget out;
        out.open(output);
        const udw::ResponseAmplitudes r = udw::response_amplitudes(params);
        const char sep = sep_for(format);
        *out.os << fmt(params.a) << sep << fmt(std::abs(r.eta0)) << sep
                << fmt(std::abs(r.eta1)) << sep << fmt(r.p) << sep << r.modes_used
                << "\n";
        return 0;
    }
};

struct GmeCmd {
    std::string state_file;
    std::string output;

    int run() const {
        std::ifstream in(state_file);
        if (!in) throw udw::IoError("cannot open state file: " + state_file);
        OutputTarget out;
        out.open(output);
        const std::vector<udw::XState> states = udw::read_xstates(in);
        if (states.empty()) throw udw::ValidationError(state_file + ": no records");
        for (const udw::XState& s : states) *out.os << fmt(udw::gme_xstate(s)) << "\n";
        return 0;
    }
};

struct SweepCmd {
    udw::DetectorParams params;
    int n_total = 3;
    int n_accel = 1;
    double alpha = 1.0 / std::sqrt(2.0);
    double a_min = 0.0;
    double a_max = 0.5;
    int steps = 51;
    int workers = default_workers();
    std::string output;
    std::string format = "csv";

    int run() const {
        if (!(a_min <= a_max) || steps < 1)
            throw udw::ValidationError("sweep: need a_min <= a_max and steps >= 1");
        OutputTarget out;
        out.open(output);
        udw::SweepSpec spec;
        spec.base = params;
        spec.a_grid = linspace(a_min, a_max, steps);
        spec.scenario = udw::Scenario{n_total, n_accel, alpha};
        spec.workers = workers;
        if (spec.scenario.degenerate())
            std::cerr << "note: alpha = " << alpha
                      << " is a degenerate (product-state) weight; E = 0 throughout\n";
        const auto records = udw::run_sweep(spec);
        write_sweep_csv(*out.os, records, sep_for(format));
        return 0;
    }
};

struct FiguresCmd {
    // paper-faithful fixed choices: L = 200, lambda = 0.1, alpha = 1/sqrt(2),
    // sigma in {0.4, 5}. Per-sigma gap lists: the sigma=5 mode sum grows
    // roughly linearly with omega, so its default gaps stay below 0.5.
    std::vector<double> omegas04 = {0.25, 1.0, 3.0};
    std::vector<double> omegas5 = {0.2, 0.4, 0.45};
    double fig5_omega04 = 4.0;
    double fig5_omega5 = 0.45;
    double a_max = 0.5;
    int points = 101;
    int workers = default_workers();
    std::string out_dir = ".";
    std::string format = "csv";

    udw::DetectorParams profile(double sigma) const {
        udw::DetectorParams p;
        p.sigma = sigma;
        p.cavity_length = 200.0;
        p.coupling = 0.1;
        if (sigma >= 1.0) {
            // the de-excitation mode sum has a slow quasi-thermal tail at
            // large a*sigma; a 1e-10 tail would need ~1e7 modes
            p.mode_tol = 3e-4;
            p.mode_cap = 200000;
        }
        return p;
    }

    // one response curve serves every n (E depends only on the magnitudes)
    std::vector<udw::SweepRecord> curve(double sigma, double omega) const {
        udw::SweepSpec spec;
        spec.base = profile(sigma);
        spec.base.omega = omega;
        spec.a_grid = linspace(0.0, a_max, points);
        spec.scenario = udw::Scenario{3, 1, 1.0 / std::sqrt(2.0)};
        spec.workers = workers;
        return udw::run_sweep(spec);
    }

    static double e_of(const udw::SweepRecord& r, int n_accel) {
        return udw::entanglement_closed(n_accel, r.eta0_abs, r.eta1_abs,
                                        1.0 / std::sqrt(2.0));
    }

    int run() const {
        if (points < 2) throw udw::ValidationError("figures: need at least 2 grid points");
        namespace fs = std::filesystem;
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        const char sep = sep_for(format);
        const std::string ext = format == "tsv" ? ".tsv" : ".csv";

        for (double sigma : {0.4, 5.0}) {
            for (double omega : (sigma < 1.0 ? omegas04 : omegas5)) {
                const auto records = curve(sigma, omega);
                for (int n : {1, 2}) {
                    char name[128];
                    std::snprintf(name, sizeof(name), "fig_sigma%g_n%d_omega%g%s",
                                  sigma, n, omega, ext.c_str());
                    const fs::path path = fs::path(out_dir) / name;
                    std::ofstream os(path);
                    if (!os) throw udw::IoError("cannot open " + path.string());
                    os << "a" << sep << "E" << sep << "P" << "\n";
                    for (const udw::SweepRecord& r : records)
                        os << fmt(r.a) << sep << fmt(e_of(r, n)) << sep << fmt(r.p) << "\n";
                }
            }
        }

        // N-partite family: E for n = 1, 2, 3 over both sigma values
        const fs::path path = fs::path(out_dir) / ("fig_npartite" + ext);
        std::ofstream os(path);
        if (!os) throw udw::IoError("cannot open " + path.string());
        os << "a";
        for (double sigma : {0.4, 5.0}) {
            os << sep << "P_s" << sigma;
            for (int n : {1, 2, 3}) os << sep << "E_n" << n << "_s" << sigma;
        }
        os << "\n";
        const auto lo = curve(0.4, fig5_omega04);
        const auto hi = curve(5.0, fig5_omega5);
        for (int i = 0; i < points; ++i) {
            os << fmt(lo[i].a);
            for (const auto* block : {&lo, &hi}) {
                os << sep << fmt((*block)[i].p);
                for (int n : {1, 2, 3}) os << sep << fmt(e_of((*block)[i], n));
            }
            os << "\n";
        }
        return 0;
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Unruh-DeWitt detector response and GHZ-state entanglement"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_path;
    app.add_option("--config", config_path,
                   "key = value file; command-line flags take precedence");

    ResponseCmd response;
    CLI::App* c_resp = app.add_subcommand("response", "first-order response at one point");
    add_detector_options(c_resp, response.params, true);
    c_resp->add_option("--output", response.output, "write the row here instead of stdout");
    c_resp->add_option("--format", response.format, "csv or tsv")
        ->check(CLI::IsMember({"csv", "tsv"}));

    GmeCmd gme;
    CLI::App* c_gme = app.add_subcommand("gme", "entanglement of serialized X states");
    c_gme->add_option("state_file", gme.state_file, "X-state records, one per line")
        ->required();
    c_gme->add_option("--output", gme.output, "write values here instead of stdout");

    SweepCmd sweep;
    CLI::App* c_sweep = app.add_subcommand("sweep", "entanglement vs acceleration grid");
    add_detector_options(c_sweep, sweep.params, false);
    c_sweep->add_option("--N", sweep.n_total, "total detectors");
    c_sweep->add_option("--n", sweep.n_accel, "accelerated detectors");
    c_sweep->add_option("--alpha", sweep.alpha, "initial GHZ weight");
    c_sweep->add_option("--a-min", sweep.a_min, "grid start");
    c_sweep->add_option("--a-max", sweep.a_max, "grid end");
    c_sweep->add_option("--steps", sweep.steps, "grid size");
    c_sweep->add_option("--workers", sweep.workers, "parallelism (UDW_GME_WORKERS)");
    c_sweep->add_option("--output", sweep.output, "CSV path (default stdout)");
    c_sweep->add_option("--format", sweep.format, "csv or tsv")
        ->check(CLI::IsMember({"csv", "tsv"}));

    FiguresCmd figures;
    CLI::App* c_fig = app.add_subcommand("figures", "paper-style curve families");
    c_fig->add_option("--omegas04", figures.omegas04, "energy gaps for the sigma=0.4 files");
    c_fig->add_option("--omegas5", figures.omegas5, "energy gaps for the sigma=5 files");
    c_fig->add_option("--fig5-omega04", figures.fig5_omega04,
                      "sigma=0.4 gap for the N-partite file");
    c_fig->add_option("--fig5-omega5", figures.fig5_omega5,
                      "sigma=5 gap for the N-partite file");
    c_fig->add_option("--a-max", figures.a_max, "grid end");
    c_fig->add_option("--points", figures.points, "grid size");
    c_fig->add_option("--workers", figures.workers, "parallelism (UDW_GME_WORKERS)");
    c_fig->add_option("--out-dir", figures.out_dir, "output directory");
    c_fig->add_option("--format", figures.format, "csv or tsv")
        ->check(CLI::IsMember({"csv", "tsv"}));

    try {
        for (int i = 1; i < argc; ++i) {
            const std::string arg = argv[i];
            if (arg == "--config" && i + 1 < argc) {
                apply_config_file(app, argv[i + 1]);
                break;
            }
            if (arg.rfind("--config=", 0) == 0) {
                apply_config_file(app, arg.substr(9));
                break;
            }
        }
    } catch (const udw::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const udw::Error& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitValidation;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (c_resp->parsed()) return response.run();
        if (c_gme->parsed()) return gme.run();
        if (c_sweep->parsed()) return sweep.run();
        return figures.run();
    } catch (const udw::ConvergenceError& e) {
        std::cerr << "convergence failure: " << e.what() << "\n";
        return kExitConvergence;
    } catch (const udw::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const udw::ValidationError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitValidation;
    } catch (const udw::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
