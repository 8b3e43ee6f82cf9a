// irnn: command-line front end.
//
//   irnn penalty curves --kind mcp --lambda 1 --gamma 1.5 --grid 0:5:0.01
//   irnn bench phase --ranks 3..12 --trials 20 --seed 7
//   irnn bench noisy --noise 0.1 --seed 7
//   irnn complete --input obs.csv --penalty scad --out xhat.csv
//   irnn inpaint --in img.png --random 0.5 --penalty lp --out rec.png
//
// Any option may also come from a TOML file given with --config; values on
// the command line win.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "irnn/baseline.hpp"
#include "irnn/bench.hpp"
#include "irnn/imaging.hpp"
#include "irnn/matrix_io.hpp"
#include "irnn/penalty.hpp"
#include "irnn/solver.hpp"

namespace {

using namespace irnn;

constexpr int kUsageError = 2;
constexpr int kRuntimeError = 1;

// Thrown for inconsistent settings discovered after parsing.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        out.push_back(item);
    return out;
}

/// "3..12" or "3,5,7".
std::vector<Index> parse_ranks(const std::string &text) {
    std::vector<Index> ranks;
    const auto dots = text.find("..");
    try {
        if (dots != std::string::npos) {
            const Index lo = parse_index(text.substr(0, dots));
            const Index hi = parse_index(text.substr(dots + 2));
            if (hi < lo)
                throw UsageError("empty rank range " + text);
            for (Index r = lo; r <= hi; ++r)
                ranks.push_back(r);
        } else {
            for (const auto &item : split(text, ','))
                ranks.push_back(parse_index(item));
        }
    } catch (const PreconditionError &) {
        throw UsageError("bad rank list '" + text + "'");
    }
    if (ranks.empty())
        throw UsageError("empty rank list");
    return ranks;
}

/// "start:stop:step", stop included when it lies on the grid.
std::vector<double> parse_grid(const std::string &text) {
    const auto parts = split(text, ':');
    if (parts.size() != 3)
        throw UsageError("grid must be start:stop:step");
    double start, stop, step;
    try {
        start = parse_double(parts[0]);
        stop = parse_double(parts[1]);
        step = parse_double(parts[2]);
    } catch (const PreconditionError &) {
        throw UsageError("bad grid '" + text + "'");
    }
    if (!(step > 0) || !(stop >= start) || !std::isfinite(stop))
        throw UsageError("grid needs step > 0 and stop >= start");
    const auto count = static_cast<long long>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 10'000'000)
        throw UsageError("grid too large");
    std::vector<double> grid;
    for (long long i = 0; i < count; ++i)
        grid.push_back(start + static_cast<double>(i) * step);
    return grid;
}

struct PenaltyArgs {
    std::string kind = "lp";
    std::optional<double> lambda;
    std::optional<double> gamma;
    std::optional<double> p;
    Index trunc_rank = 0;

    void add_to(CLI::App *app, const std::string &flag) {
        app->add_option(flag, kind, "Penalty kind (lp, scad, logarithm, mcp, capped-l1, etp, "
                                    "geman, laplace, nuclear, truncated)")
            ->capture_default_str();
        app->add_option("--lambda", lambda, "Regularization weight");
        app->add_option("--gamma", gamma, "Shape parameter");
        app->add_option("--p", p, "Exponent for lp");
        app->add_option("--trunc-rank", trunc_rank, "Leading singular values left "
                                                    "unpenalized (truncated)");
    }

    Penalty build(Penalty base) const {
        if (lambda)
            base.lambda = *lambda;
        if (gamma)
            base.gamma = *gamma;
        if (p)
            base.p = *p;
        base.trunc_rank = trunc_rank;
        base.validate();
        return base;
    }
};

std::ostream &open_out(const std::string &path, std::ofstream &file) {
    if (path == "-")
        return std::cout;
    file.open(path);
    if (!file)
        throw std::runtime_error("cannot open " + path + " for writing");
    return file;
}

void close_out(const std::string &path, std::ofstream &file) {
    if (path == "-") {
        std::cout.flush();
        return;
    }
    file.close();
    if (!file)
        throw std::runtime_error("failed writing " + path);
}

// A subcommand: `prepare` validates and returns the work to run.
using Job = std::function<void()>;

// ---- penalty curves -------------------------------------------------------

struct CurvesArgs {
    PenaltyArgs pen;
    std::string grid = "0:5:0.01";
    std::string out = "-";
};

Job prepare_curves(const CurvesArgs &a) {
    const auto grid = parse_grid(a.grid);
    std::vector<Penalty> pens;
    const bool all = a.pen.kind == "all";
    if (all) {
        for (PenaltyKind k : nonconvex_kinds())
            pens.push_back(Penalty::make(k, a.pen.lambda.value_or(1)));
    } else {
        pens.push_back(a.pen.build(Penalty::make(parse_penalty_kind(a.pen.kind), 1)));
    }
    if (grid.front() < 0)
        throw UsageError("grid must be nonnegative");
    return [=] {
        std::ofstream file;
        std::ostream &os = open_out(a.out, file);
        os << (all ? "kind,theta,g,dg\n" : "theta,g,dg\n");
        for (const Penalty &pen : pens)
            for (double t : grid) {
                if (all)
                    os << to_string(pen.kind) << ',';
                os << format_double(t) << ',' << format_double(value(pen, t)) << ','
                   << format_double(supergradient(pen, t).value()) << '\n';
            }
        close_out(a.out, file);
    };
}

// ---- bench ----------------------------------------------------------------

struct BenchArgs {
    Index m = 60, n = 60;
    std::string ranks = "3..12";
    int trials = 20;
    double fraction = 0.5;
    double noise = 0;
    std::vector<std::string> methods{"lp", "convex"};
    std::optional<double> p;
    std::optional<std::uint64_t> seed;
    double threshold = 1e-3;
    std::optional<int> max_iters;
    unsigned threads = 0;
    bool timing = false;
    std::string trials_csv, aggregate_csv;
};

Job prepare_bench(const BenchArgs &a, bool noisy) {
    if (!a.seed)
        throw UsageError("--seed is required for bench runs");
    ExperimentSpec spec;
    spec.m = a.m;
    spec.n = a.n;
    spec.ranks = parse_ranks(a.ranks);
    spec.trials = a.trials;
    spec.observe_fraction = a.fraction;
    spec.noise_sigma = a.noise;
    spec.seed = *a.seed;
    spec.success_threshold = a.threshold;
    spec.schedule = noisy ? Schedule::Noisy : Schedule::NoiseFree;
    spec.max_iters = a.max_iters;
    spec.threads = a.threads;
    for (const auto &name : a.methods) {
        MethodSpec m = MethodSpec::parse(name);
        if (!m.convex && m.penalty.kind == PenaltyKind::Lp && a.p) {
            m.penalty.p = *a.p;
            m.penalty.validate();
        }
        spec.methods.push_back(m);
    }
    if (!noisy && a.noise != 0)
        throw UsageError("bench phase is noise-free; use bench noisy");
    spec.validate();
    const std::string prefix = noisy ? "noisy" : "phase";
    const std::string trials_csv = a.trials_csv.empty() ? prefix + "_trials.csv" : a.trials_csv;
    const std::string agg_csv =
        a.aggregate_csv.empty() ? prefix + "_aggregate.csv" : a.aggregate_csv;
    const bool timing = a.timing;
    return [=] {
        const ExperimentResult res = run_experiment(spec);
        std::ofstream f1, f2;
        write_trials_csv(open_out(trials_csv, f1), res, timing);
        close_out(trials_csv, f1);
        write_aggregate_csv(open_out(agg_csv, f2), res);
        close_out(agg_csv, f2);
        for (const auto &t : res.trials)
            if (!t.error.empty())
                std::cerr << "warning: " << t.method << " rank " << t.rank << " trial "
                          << t.trial << ": " << t.error << '\n';
    };
}

// ---- complete -------------------------------------------------------------

struct CompleteArgs {
    std::string input, out, report;
    std::optional<Index> rows, cols;
    PenaltyArgs pen;
    bool noisy = false;
    std::optional<int> max_iters;
};

Job prepare_complete(const CompleteArgs &a) {
    if (a.rows.has_value() != a.cols.has_value())
        throw UsageError("--rows and --cols go together");
    const bool convex = a.pen.kind == "convex";
    std::optional<Penalty> pen;
    if (!convex)
        pen = a.pen.build(Penalty::make(parse_penalty_kind(a.pen.kind), 1));
    if (a.max_iters && *a.max_iters < 1)
        throw UsageError("--max-iters must be positive");
    return [=] {
        std::optional<Shape> shape;
        if (a.rows)
            shape = Shape{*a.rows, *a.cols};
        const CompletionProblem problem = load_triplet_csv(a.input, shape);
        const CompletionLoss loss(problem);
        SolveReport rep;
        // With --lambda the weight is held fixed; otherwise the preset
        // continuation sets it from the data.
        if (convex) {
            ConvexConfig cfg =
                a.noisy ? convex_noisy_config(problem) : convex_noise_free_config(problem);
            if (a.pen.lambda) {
                cfg.continuation.reset();
                cfg.lambda = *a.pen.lambda;
            }
            if (a.max_iters)
                cfg.max_iters = *a.max_iters;
            rep = solve_convex(loss, cfg);
        } else {
            SolverConfig cfg = a.noisy ? noisy_config(problem) : noise_free_config(problem);
            if (a.pen.lambda)
                cfg.continuation.reset();
            if (a.max_iters)
                cfg.max_iters = *a.max_iters;
            rep = solve(loss, *pen, cfg);
        }
        save_dense_csv(a.out, rep.final_X);
        if (!a.report.empty()) {
            std::ofstream file;
            write_report_csv(open_out(a.report, file), rep);
            close_out(a.report, file);
        }
        std::cerr << "iterations " << rep.iterations << ", stopped on "
                  << to_string(rep.termination) << ", residual "
                  << format_double(rep.final_residual) << '\n';
    };
}

// ---- inpaint --------------------------------------------------------------

struct InpaintArgs {
    std::string in, mask, out, report, corrupted_out;
    std::optional<double> random;
    std::uint64_t seed = 0;
    PenaltyArgs pen;
    std::optional<double> lambda0_factor, target_factor;
    std::optional<int> max_iters;
    unsigned threads = 1;
};

Job prepare_inpaint(const InpaintArgs &a) {
    if (a.mask.empty() == !a.random.has_value())
        throw UsageError("give exactly one of --mask and --random");
    if (a.random && !(*a.random > 0 && *a.random < 1))
        throw UsageError("--random must lie in (0, 1)");
    const MethodSpec method =
        a.pen.kind == "convex"
            ? MethodSpec::convex_baseline()
            : MethodSpec::irnn(a.pen.build(Penalty::make(parse_penalty_kind(a.pen.kind), 1)));
    InpaintOptions opt = InpaintOptions::preset(method);
    if (a.lambda0_factor)
        opt.lambda0_factor = *a.lambda0_factor;
    if (a.target_factor)
        opt.target_factor = *a.target_factor;
    if (a.max_iters)
        opt.max_iters = *a.max_iters;
    opt.threads = a.threads;
    opt.validate();
    return [=] {
        const ImageBuffer clean = read_png(a.in);
        auto [corrupted, mask] = a.random ? corrupt_random(clean, *a.random, a.seed)
                                          : apply_text_mask(clean, read_png(a.mask));
        const ImageBuffer recovered = inpaint(corrupted, mask, opt);
        write_png(a.out, recovered);
        if (!a.corrupted_out.empty())
            write_png(a.corrupted_out, corrupted);
        const double before = psnr(clean, corrupted), after = psnr(clean, recovered);
        if (!a.report.empty()) {
            std::ofstream file;
            std::ostream &os = open_out(a.report, file);
            os << "method,observed_fraction,psnr_corrupted,psnr_recovered\n"
               << opt.method.label << ','
               << format_double(static_cast<double>(mask.observed_count()) /
                                static_cast<double>(clean.width() * clean.height()))
               << ',' << format_double(before) << ',' << format_double(after) << '\n';
            close_out(a.report, file);
        }
        std::cerr << "PSNR corrupted " << before << " dB, recovered " << after << " dB\n";
    };
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Low-rank matrix recovery with iteratively reweighted nuclear norms"};
    app.set_config("--config", "", "TOML file with option defaults");
    app.require_subcommand(1);

    std::function<Job()> prepare;

    auto *penalty = app.add_subcommand("penalty", "Penalty function utilities");
    penalty->require_subcommand(1);
    CurvesArgs curves;
    auto *curves_cmd = penalty->add_subcommand("curves", "Sample g and its supergradient");
    curves.pen.add_to(curves_cmd, "--kind");
    curves_cmd->add_option("--grid", curves.grid, "start:stop:step")->capture_default_str();
    curves_cmd->add_option("--out", curves.out, "Output CSV ('-' for stdout)")
        ->capture_default_str();
    curves_cmd->callback([&] { prepare = [&] { return prepare_curves(curves); }; });

    auto *bench = app.add_subcommand("bench", "Synthetic completion experiments");
    bench->require_subcommand(1);
    BenchArgs phase_args, noisy_args;
    noisy_args.noise = 0.1;
    auto add_bench = [&](const char *name, const char *desc, BenchArgs &b, bool noisy) {
        auto *cmd = bench->add_subcommand(name, desc);
        cmd->add_option("--m", b.m, "Rows")->capture_default_str();
        cmd->add_option("--n", b.n, "Columns")->capture_default_str();
        cmd->add_option("--ranks", b.ranks, "Rank grid, e.g. 3..12 or 3,6,9")
            ->capture_default_str();
        cmd->add_option("--trials", b.trials, "Trials per rank")->capture_default_str();
        cmd->add_option("--fraction", b.fraction, "Observed fraction")->capture_default_str();
        if (noisy)
            cmd->add_option("--noise", b.noise, "Noise standard deviation")
                ->capture_default_str();
        cmd->add_option("--methods", b.methods, "Methods (penalty kinds or convex)")
            ->delimiter(',')
            ->capture_default_str();
        cmd->add_option("--p", b.p, "Exponent for the lp method");
        cmd->add_option("--seed", b.seed, "Base seed (required)");
        cmd->add_option("--threshold", b.threshold, "Success threshold on relative error")
            ->capture_default_str();
        cmd->add_option("--max-iters", b.max_iters, "Override the preset iteration cap");
        cmd->add_option("--threads", b.threads, "Worker threads (0 = all cores)")
            ->capture_default_str();
        cmd->add_flag("--timing", b.timing, "Record wall times in the per-trial CSV");
        cmd->add_option("--trials-csv", b.trials_csv, "Per-trial CSV path");
        cmd->add_option("--aggregate-csv", b.aggregate_csv, "Per-rank CSV path");
        cmd->callback([&, noisy] { prepare = [&, noisy] { return prepare_bench(b, noisy); }; });
    };
    add_bench("phase", "Noise-free recovery frequency versus rank", phase_args, false);
    add_bench("noisy", "Relative error versus rank with noisy observations", noisy_args, true);

    CompleteArgs complete;
    auto *complete_cmd = app.add_subcommand("complete", "Complete a matrix from triplets");
    complete_cmd->add_option("--input", complete.input, "Observed triplet CSV")->required();
    complete_cmd->add_option("--out", complete.out, "Recovered dense CSV")->required();
    complete_cmd->add_option("--report", complete.report, "Per-iteration CSV");
    complete_cmd->add_option("--rows", complete.rows, "Rows when the file has no shape line");
    complete_cmd->add_option("--cols", complete.cols, "Columns when the file has no shape line");
    complete.pen.add_to(complete_cmd, "--penalty");
    complete_cmd->add_flag("--noisy", complete.noisy, "Use the noisy-data schedule");
    complete_cmd->add_option("--max-iters", complete.max_iters, "Iteration cap");
    complete_cmd->callback([&] { prepare = [&] { return prepare_complete(complete); }; });

    InpaintArgs inp;
    auto *inpaint_cmd = app.add_subcommand("inpaint", "Recover a corrupted image");
    inpaint_cmd->add_option("--in", inp.in, "Clean PNG")->required();
    inpaint_cmd->add_option("--mask", inp.mask, "Text overlay PNG (nonzero = corrupted)");
    inpaint_cmd->add_option("--random", inp.random, "Fraction of pixels to randomize");
    inpaint_cmd->add_option("--seed", inp.seed, "Seed for --random")->capture_default_str();
    inp.pen.kind = "lp";
    inp.pen.add_to(inpaint_cmd, "--penalty");
    inpaint_cmd->add_option("--lambda0-factor", inp.lambda0_factor, "λ₀ over max |observed|");
    inpaint_cmd->add_option("--target-factor", inp.target_factor, "λ_t over λ₀");
    inpaint_cmd->add_option("--max-iters", inp.max_iters, "Iteration cap per channel");
    inpaint_cmd->add_option("--threads", inp.threads, "Channel threads")->capture_default_str();
    inpaint_cmd->add_option("--out", inp.out, "Recovered PNG")->required();
    inpaint_cmd->add_option("--corrupted-out", inp.corrupted_out, "Corrupted PNG");
    inpaint_cmd->add_option("--report", inp.report, "PSNR CSV");
    inpaint_cmd->callback([&] { prepare = [&] { return prepare_inpaint(inp); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kUsageError;
    }

    Job job;
    try {
        job = prepare();
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    }
    try {
        job();
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
    return 0;
}
