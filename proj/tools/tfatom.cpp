// SPDX-License-Identifier: Apache-2.0
//
// tfatom: sparse time-frequency analysis from the command line.
//   synth    generate test signals (sinusoid / chirps / mixture)
//   analyze  run dgt | l1 | anm-window | anm-joint on a signal or WAV
//   render   rasterize a solution to a PGM image (+ optional CSV)
//   curve    descending energy curves of one or more solutions as CSV

#include <algorithm>
#include <chrono>
#include <complex>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tfatom/errors.hpp"
#include "tfatom/gabor.hpp"
#include "tfatom/io.hpp"
#include "tfatom/signals.hpp"
#include "tfatom/solvers.hpp"
#include "tfatom/tfr.hpp"
#include "tfatom/types.hpp"

namespace {

using namespace tfatom;

struct SynthArgs {
    std::string kind;
    index_t length = 0;
    double f0 = -1.0; // <0 means "use the kind's default"
    double rate = 0.0;
    double rate2 = 0.0;
    double amplitude = 1.0;
    double sample_rate = 0.0;
    bool rate_set = false, rate2_set = false, amp_set = false;
    std::string output;
};

struct AnalyzeArgs {
    std::string method;
    std::string input;
    std::string output;
    std::string window = "slepian";
    index_t winlen = 0;
    double bandwidth = 0.1;
    index_t hop = 0;
    index_t channels = 0;
    double rho = 1.0;
    int max_iters = 5000;
    double primal_tol = 0.0;
    double dual_tol = 0.0;
    double rank_tol = 1e-6;
    std::string freq_method = "pencil";
};

struct RenderArgs {
    std::string input;
    std::string output;
    std::string csv;
    index_t bins = 1024;
    double db_floor = -80.0;
};

struct CurveArgs {
    std::vector<std::string> inputs;
    std::string output;
};

TestSignalKind parse_kind(const std::string& kind) {
    if (kind == "sin")
        return TestSignalKind::sinusoid;
    if (kind == "chirp-lin")
        return TestSignalKind::linear_chirp;
    if (kind == "chirp-quad")
        return TestSignalKind::quadratic_chirp;
    return TestSignalKind::mixture;
}

WindowKind parse_window(const std::string& name) {
    if (name == "hann")
        return WindowKind::hann;
    if (name == "rectangular" || name == "rect")
        return WindowKind::rectangular;
    return WindowKind::slepian;
}

int run_synth(const SynthArgs& args) {
    const TestSignalKind kind = parse_kind(args.kind);
    std::vector<Tone> components;
    const bool has_override =
        args.f0 >= 0.0 || args.rate_set || args.rate2_set || args.amp_set;
    if (kind == TestSignalKind::mixture) {
        if (has_override)
            throw std::invalid_argument("mixture has fixed components; "
                                        "--freq/--rate/--rate2/--amp apply to single kinds");
        components = default_components(kind, args.length);
    } else {
        Tone t = default_components(kind, args.length)[0];
        if (args.f0 >= 0.0)
            t.f0 = args.f0;
        if (args.rate_set)
            t.rate = args.rate;
        if (args.rate2_set)
            t.rate2 = args.rate2;
        if (args.amp_set)
            t.amplitude = args.amplitude;
        components = {t};
    }

    Signal f = synth_tones(args.length, components);
    if (args.sample_rate > 0.0)
        f.sample_rate = args.sample_rate;

    io::json generator;
    generator["kind"] = args.kind;
    io::json comps = io::json::array();
    for (const auto& t : components) {
        io::json c;
        c["f0"] = t.f0;
        c["rate"] = t.rate;
        c["rate2"] = t.rate2;
        c["amplitude"] = t.amplitude;
        comps.push_back(std::move(c));
    }
    generator["components"] = std::move(comps);
    io::write_signal(args.output, f, generator);
    return 0;
}

int run_analyze(const AnalyzeArgs& args, int threads, std::uint64_t seed) {
    Signal f = io::read_signal(args.input);

    // WAV (or any) input: keep the largest prefix the hop divides
    const index_t full_length = f.length();
    const index_t truncated = (full_length / args.hop) * args.hop;
    if (truncated < 1)
        throw FrameError("signal shorter than one hop");
    if (truncated != full_length)
        f.samples.conservativeResize(truncated);

    Window window = make_window(parse_window(args.window), args.winlen, args.bandwidth);
    GaborFrame frame = make_frame(std::move(window), args.hop, args.channels, truncated);

    AdmmOptions opts;
    opts.rho = args.rho;
    opts.max_iters = args.max_iters;
    opts.primal_tol = args.primal_tol;
    opts.dual_tol = args.dual_tol;
    opts.threads = threads;
    opts.seed = seed;

    std::string method = args.method;
    for (auto& ch : method)
        if (ch == '-')
            ch = '_';
    const FreqMethod fmethod =
        args.freq_method == "prony" ? FreqMethod::prony : FreqMethod::matrix_pencil;

    SparseTF tf;
    int iterations = 0;
    bool converged = true;
    double objective = 0.0, primal_residual = 0.0, dual_residual = 0.0;
    double constraint_residual = 0.0;
    const double f_norm = f.samples.norm();

    const auto t0 = std::chrono::steady_clock::now();
    if (method == "dgt") {
        Window dual = canonical_dual(frame);
        GridCoefficients c = dgt(f, frame, dual);
        tf = grid_to_sparse(c, frame, 0.0);
        objective = c.cwiseAbs().sum();
        const double err = (idgt(c, frame).samples - f.samples).norm();
        constraint_residual = f_norm > 0.0 ? err / f_norm : err;
    } else if (method == "l1") {
        L1Solution sol = solve_l1_bp(f, frame, opts);
        tf = grid_to_sparse(sol.coefficients, frame, 0.0);
        iterations = sol.iterations;
        converged = sol.converged;
        objective = sol.objective;
        primal_residual = sol.trace.empty() ? 0.0 : sol.trace.back();
        constraint_residual = sol.constraint_residual;
    } else if (method == "anm_window" || method == "anm_joint") {
        AnmSolution sol = method == "anm_joint" ? solve_joint_anm(f, frame, opts)
                                                : solve_windowwise_anm(f, frame, opts);
        std::vector<ExtractionIssue> issues;
        tf = extract_sparse_tf(sol, frame, args.rank_tol, fmethod, &issues);
        for (const auto& issue : issues)
            std::cerr << "warning: shift " << issue.shift << ": " << issue.message << "\n";
        iterations = sol.iterations;
        converged = sol.converged;
        objective = sol.objective;
        primal_residual = sol.trace.primal.empty() ? 0.0 : sol.trace.primal.back();
        dual_residual = sol.trace.dual.empty() ? 0.0 : sol.trace.dual.back();
        constraint_residual = sol.max_constraint_violation;
    } else {
        throw std::invalid_argument("unknown method: " + args.method);
    }
    const double wall_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    io::SolutionFile out;
    out.method = method;
    out.tf = tf;
    out.signal_meta["source"] = args.input;
    out.signal_meta["length"] = truncated;
    if (f.sample_rate)
        out.signal_meta["sample_rate"] = *f.sample_rate;
    else
        out.signal_meta["sample_rate"] = nullptr;
    out.signal_meta["truncated"] = truncated != full_length;
    out.frame_meta["window"] = window_kind_name(frame.window.kind);
    out.frame_meta["support"] = frame.support();
    out.frame_meta["half_bandwidth"] = args.bandwidth;
    out.frame_meta["hop"] = frame.hop;
    out.frame_meta["channels"] = frame.channels;
    out.frame_meta["signal_length"] = frame.signal_length;
    out.solver_meta["rho"] = args.rho;
    out.solver_meta["max_iters"] = args.max_iters;
    out.solver_meta["primal_tol"] = args.primal_tol; // 0 = library default
    out.solver_meta["dual_tol"] = args.dual_tol;
    out.solver_meta["rank_tol"] = args.rank_tol;
    out.solver_meta["freq_method"] = args.freq_method;
    out.solver_meta["threads"] = threads;
    out.solver_meta["iterations"] = iterations;
    out.solver_meta["converged"] = converged;
    out.solver_meta["objective"] = objective;
    out.solver_meta["primal_residual"] = primal_residual;
    out.solver_meta["dual_residual"] = dual_residual;
    out.solver_meta["constraint_residual"] = constraint_residual;
    out.solver_meta["wall_time_s"] = wall_s;
    io::write_solution(args.output, out);

    if (!converged) {
        std::cerr << "warning: max_iters reached before tolerance; output written\n";
        return 3;
    }
    return 0;
}

int run_render(const RenderArgs& args) {
    io::SolutionFile sol = io::read_solution(args.input);
    Eigen::MatrixXd img = rasterize(sol.tf, args.bins, args.db_floor);
    io::write_pgm(args.output, img, args.db_floor);
    if (!args.csv.empty())
        io::write_csv(args.csv, img);
    return 0;
}

int run_curve(const CurveArgs& args) {
    std::vector<std::string> names;
    std::vector<Eigen::VectorXd> curves;
    for (const auto& input : args.inputs) {
        io::SolutionFile sol = io::read_solution(input);
        std::string name = sol.method;
        int suffix = 2;
        while (std::find(names.begin(), names.end(), name) != names.end())
            name = sol.method + "_" + std::to_string(suffix++);
        names.push_back(name);
        curves.push_back(energy_curve(sol.tf));
    }
    io::write_curves_csv(args.output, names, curves);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sparse off-grid time-frequency analysis"};
    app.set_version_flag("--version", "tfatom 0.1.0");
    app.set_config("--config", "", "TOML-style config file (command-line flags win)");
    app.require_subcommand(1);

    int threads = 1;
    std::uint64_t seed = 0;
    app.add_option("--threads", threads, "worker-count hint for the solvers")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--seed", seed, "reserved");

    SynthArgs synth_args;
    auto* synth = app.add_subcommand("synth", "generate a test signal");
    synth->fallthrough();
    synth->add_option("--kind", synth_args.kind, "signal kind")
        ->required()
        ->check(CLI::IsMember({"sin", "chirp-lin", "chirp-quad", "mix"}));
    synth->add_option("--length", synth_args.length, "number of samples")
        ->required()
        ->check(CLI::PositiveNumber);
    synth->add_option("--freq,--f0", synth_args.f0, "start frequency in cycles/sample");
    auto* rate_opt =
        synth->add_option("--rate", synth_args.rate, "linear chirp rate (cycles/sample^2)");
    auto* rate2_opt = synth->add_option("--rate2", synth_args.rate2,
                                        "quadratic chirp rate (cycles/sample^3)");
    auto* amp_opt = synth->add_option("--amp", synth_args.amplitude, "component amplitude");
    synth->add_option("--sample-rate", synth_args.sample_rate, "metadata only (Hz)");
    synth->add_option("--output,-o", synth_args.output, "output signal path")->required();

    AnalyzeArgs analyze_args;
    auto* analyze = app.add_subcommand("analyze", "run a method on a signal");
    analyze->fallthrough();
    analyze->add_option("--method", analyze_args.method, "analysis method")
        ->required()
        ->check(CLI::IsMember({"dgt", "l1", "anm-window", "anm_window", "anm-joint",
                               "anm_joint"}));
    analyze->add_option("--input,-i", analyze_args.input, "signal file (raw or 16-bit mono WAV)")
        ->required();
    analyze->add_option("--output,-o", analyze_args.output, "solution JSON path")->required();
    analyze->add_option("--window", analyze_args.window, "analysis window kind")
        ->check(CLI::IsMember({"slepian", "hann", "rectangular", "rect"}))
        ->capture_default_str();
    analyze->add_option("--winlen", analyze_args.winlen, "window support length J")
        ->required()
        ->check(CLI::PositiveNumber);
    analyze->add_option("--bandwidth", analyze_args.bandwidth,
                        "slepian half-bandwidth (cycles/sample)")
        ->capture_default_str();
    analyze->add_option("--hop", analyze_args.hop, "time shift a")
        ->required()
        ->check(CLI::PositiveNumber);
    analyze->add_option("--channels", analyze_args.channels, "frequency channels M")
        ->required()
        ->check(CLI::PositiveNumber);
    analyze->add_option("--rho", analyze_args.rho, "ADMM penalty parameter")
        ->capture_default_str();
    analyze->add_option("--max-iters", analyze_args.max_iters, "iteration cap")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    analyze->add_option("--primal-tol", analyze_args.primal_tol,
                        "primal stopping tolerance (0 = auto)");
    analyze->add_option("--dual-tol", analyze_args.dual_tol,
                        "dual stopping tolerance (0 = auto)");
    analyze->add_option("--rank-tol", analyze_args.rank_tol,
                        "relative eigenvalue cutoff for rank detection")
        ->capture_default_str();
    analyze->add_option("--freq-method", analyze_args.freq_method,
                        "frequency recovery method")
        ->check(CLI::IsMember({"pencil", "prony"}))
        ->capture_default_str();

    RenderArgs render_args;
    auto* render = app.add_subcommand("render", "rasterize a solution to PGM");
    render->fallthrough();
    render->add_option("--input,-i", render_args.input, "solution JSON")->required();
    render->add_option("--output,-o", render_args.output, "PGM path")->required();
    render->add_option("--bins", render_args.bins, "frequency bins")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    render->add_option("--db-floor", render_args.db_floor, "dB clamp (negative)")
        ->capture_default_str();
    render->add_option("--csv", render_args.csv, "also write the raw dB matrix as CSV");

    CurveArgs curve_args;
    auto* curve = app.add_subcommand("curve", "energy curves of solutions as CSV");
    curve->fallthrough();
    curve->add_option("--output,-o", curve_args.output, "CSV path")->required();
    curve->add_option("solutions", curve_args.inputs, "solution JSON files")
        ->required()
        ->expected(-1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(synth)) {
            synth_args.rate_set = rate_opt->count() > 0;
            synth_args.rate2_set = rate2_opt->count() > 0;
            synth_args.amp_set = amp_opt->count() > 0;
            return run_synth(synth_args);
        }
        if (app.got_subcommand(analyze))
            return run_analyze(analyze_args, threads, seed);
        if (app.got_subcommand(render))
            return run_render(render_args);
        if (app.got_subcommand(curve))
            return run_curve(curve_args);
    } catch (const FrameError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
