#include "irnn/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <ostream>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <thread>

#include "irnn/baseline.hpp"
#include "irnn/matrix_io.hpp"
#include "irnn/solver.hpp"

namespace irnn {

Matrix gen_lowrank(Index m, Index n, Index r, std::uint64_t seed) {
    if (m <= 0 || n <= 0)
        throw PreconditionError("gen_lowrank: shape must be positive");
    if (r < 0 || r > std::min(m, n))
        throw PreconditionError("gen_lowrank: rank " + std::to_string(r) +
                                " out of range [0, min(m, n)]");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Matrix left(m, r), right(r, n);
    for (Index j = 0; j < r; ++j)
        for (Index i = 0; i < m; ++i)
            left(i, j) = normal(rng);
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < r; ++i)
            right(i, j) = normal(rng);
    if (r == 0)
        return Matrix::Zero(m, n);
    return left * right;
}

ObservationMask sample_mask(Index m, Index n, double fraction,
                            std::uint64_t seed) {
    if (!(fraction > 0 && fraction <= 1))
        throw PreconditionError("sample_mask: fraction must lie in (0, 1]");
    const Index total = m * n;
    const auto count = static_cast<Index>(std::llround(fraction * static_cast<double>(total)));
    if (count < 1)
        throw PreconditionError("sample_mask: no entries would be observed");
    std::vector<Index> order(static_cast<std::size_t>(total));
    for (Index k = 0; k < total; ++k)
        order[static_cast<std::size_t>(k)] = k;
    std::mt19937_64 rng(seed);
    // Partial Fisher-Yates: the first `count` slots are a uniform sample.
    for (Index k = 0; k < count; ++k) {
        std::uniform_int_distribution<Index> pick(k, total - 1);
        std::swap(order[static_cast<std::size_t>(k)],
                  order[static_cast<std::size_t>(pick(rng))]);
    }
    std::vector<Coordinate> coords;
    coords.reserve(static_cast<std::size_t>(count));
    for (Index k = 0; k < count; ++k) {
        const Index idx = order[static_cast<std::size_t>(k)];
        coords.emplace_back(idx % m, idx / m);
    }
    return ObservationMask(m, n, std::move(coords));
}

std::vector<double> add_noise(std::vector<double> values, double sigma,
                              std::uint64_t seed) {
    if (!(sigma >= 0))
        throw PreconditionError("add_noise: sigma must be nonnegative");
    if (sigma == 0)
        return values;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    for (auto &v : values)
        v += sigma * normal(rng);
    return values;
}

double relative_error(const Matrix &X_hat, const Matrix &M) {
    if (X_hat.rows() != M.rows() || X_hat.cols() != M.cols())
        throw PreconditionError("relative_error: shape mismatch");
    const double denom = M.norm();
    if (!(denom > 0))
        throw DomainError("relative_error: reference matrix is zero");
    return (X_hat - M).norm() / denom;
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Penalty benchmark_penalty(PenaltyKind kind) {
    switch (kind) {
    case PenaltyKind::Lp:
        return Penalty::lp(1, 0.1);
    case PenaltyKind::ETP:
        return Penalty::etp(1, 0.2);
    case PenaltyKind::Geman:
        return Penalty::geman(1, 10);
    case PenaltyKind::Laplace:
        return Penalty::laplace(1, 10);
    default:
        return Penalty::make(kind, 1);
    }
}

MethodSpec MethodSpec::irnn(Penalty penalty, std::string label) {
    MethodSpec spec;
    spec.convex = false;
    spec.penalty = penalty;
    spec.label = label.empty() ? "irnn-" + std::string(to_string(penalty.kind))
                               : std::move(label);
    return spec;
}

MethodSpec MethodSpec::convex_baseline() {
    MethodSpec spec;
    spec.convex = true;
    spec.penalty = Penalty::nuclear(1);
    spec.label = "convex";
    return spec;
}

MethodSpec MethodSpec::parse(const std::string &name) {
    if (name == "convex" || name == "apg")
        return convex_baseline();
    std::string kind = name;
    if (kind.rfind("irnn-", 0) == 0)
        kind = kind.substr(5);
    return irnn(benchmark_penalty(parse_penalty_kind(kind)));
}

void ExperimentSpec::validate() const {
    if (m <= 0 || n <= 0)
        throw PreconditionError("experiment: shape must be positive");
    if (trials < 1)
        throw PreconditionError("experiment: trials must be at least 1");
    if (ranks.empty())
        throw PreconditionError("experiment: rank grid is empty");
    for (Index r : ranks)
        if (r < 0 || r > std::min(m, n))
            throw PreconditionError("experiment: rank " + std::to_string(r) +
                                    " exceeds min(m, n)");
    if (!(observe_fraction > 0 && observe_fraction <= 1))
        throw PreconditionError("experiment: observe_fraction must lie in (0, 1]");
    if (!(noise_sigma >= 0))
        throw PreconditionError("experiment: noise_sigma must be nonnegative");
    if (methods.empty())
        throw PreconditionError("experiment: no methods selected");
    for (const auto &method : methods)
        method.penalty.validate();
}

const AggregateRecord &ExperimentResult::aggregate(const std::string &method,
                                                   Index rank) const {
    for (const auto &agg : aggregates)
        if (agg.method == method && agg.rank == rank)
            return agg;
    throw std::out_of_range("no aggregate for " + method + " at rank " +
                            std::to_string(rank));
}

TrialData make_trial(const ExperimentSpec &spec, Index rank, int trial) {
    const std::uint64_t trial_seed =
        mix_seed(mix_seed(spec.seed, static_cast<std::uint64_t>(rank)),
                 static_cast<std::uint64_t>(trial));
    Matrix truth = gen_lowrank(spec.m, spec.n, rank, mix_seed(trial_seed, 1));
    ObservationMask mask =
        sample_mask(spec.m, spec.n, spec.observe_fraction, mix_seed(trial_seed, 2));
    std::vector<double> values;
    values.reserve(mask.size());
    for (const auto &[i, j] : mask.coordinates())
        values.push_back(truth(i, j));
    values = add_noise(std::move(values), spec.noise_sigma, mix_seed(trial_seed, 3));
    return {std::move(truth), CompletionProblem(std::move(mask), values)};
}

namespace {

bool noise_free_schedule(const ExperimentSpec &spec) {
    switch (spec.schedule) {
    case Schedule::NoiseFree: return true;
    case Schedule::Noisy: return false;
    case Schedule::Auto: break;
    }
    return spec.noise_sigma == 0;
}

SolveReport run_method(const ExperimentSpec &spec, const MethodSpec &method,
                       const CompletionProblem &problem) {
    const CompletionLoss loss(problem);
    const bool exact = noise_free_schedule(spec);
    if (method.convex) {
        ConvexConfig cfg = exact ? convex_noise_free_config(problem)
                                 : convex_noisy_config(problem);
        if (spec.max_iters)
            cfg.max_iters = *spec.max_iters;
        return solve_convex(loss, cfg);
    }
    SolverConfig cfg = exact ? noise_free_config(problem) : noisy_config(problem);
    if (spec.max_iters)
        cfg.max_iters = *spec.max_iters;
    return solve(loss, method.penalty, cfg);
}

void run_trial(const ExperimentSpec &spec, Index rank, int trial,
               std::span<TrialRecord> out) {
    const TrialData data = make_trial(spec, rank, trial);
    const double truth_norm = data.truth.norm();
    const bool trivial = data.problem.max_abs_observed() == 0;
    for (std::size_t k = 0; k < spec.methods.size(); ++k) {
        const MethodSpec &method = spec.methods[k];
        TrialRecord &rec = out[k];
        rec.method = method.label;
        rec.rank = rank;
        rec.trial = trial;
        const auto start = std::chrono::steady_clock::now();
        try {
            Matrix X_hat;
            if (trivial) {
                // All observations are zero: X = 0 minimizes every objective.
                X_hat = Matrix::Zero(spec.m, spec.n);
                rec.iterations = 0;
            } else {
                SolveReport report = run_method(spec, method, data.problem);
                rec.iterations = report.iterations;
                X_hat = std::move(report.final_X);
            }
            if (truth_norm > 0)
                rec.rel_error = relative_error(X_hat, data.truth);
            else
                rec.rel_error =
                    X_hat.norm() == 0 ? 0 : std::numeric_limits<double>::infinity();
            rec.success = rec.rel_error < spec.success_threshold;
        } catch (const std::exception &e) {
            rec.error = e.what();
            rec.rel_error = std::numeric_limits<double>::quiet_NaN();
            rec.success = false;
        }
        rec.seconds = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    }
}

} // namespace

ExperimentResult run_experiment(const ExperimentSpec &spec) {
    spec.validate();
    const std::size_t n_methods = spec.methods.size();
    const std::size_t n_jobs = spec.ranks.size() * static_cast<std::size_t>(spec.trials);
    ExperimentResult result;
    result.trials.resize(n_jobs * n_methods);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t job = next++; job < n_jobs; job = next++) {
            const Index rank = spec.ranks[job / static_cast<std::size_t>(spec.trials)];
            const int trial = static_cast<int>(job % static_cast<std::size_t>(spec.trials));
            run_trial(spec, rank, trial,
                      std::span(result.trials).subspan(job * n_methods, n_methods));
        }
    };
    unsigned threads = spec.threads ? spec.threads : std::thread::hardware_concurrency();
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n_jobs)));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(worker);
    }

    for (std::size_t k = 0; k < n_methods; ++k) {
        for (Index rank : spec.ranks) {
            AggregateRecord agg;
            agg.method = spec.methods[k].label;
            agg.rank = rank;
            int successes = 0, finite = 0;
            double error_sum = 0;
            for (const auto &rec : result.trials) {
                if (rec.method != agg.method || rec.rank != rank)
                    continue;
                ++agg.trials;
                successes += rec.success;
                if (rec.error.empty()) {
                    ++finite;
                    error_sum += rec.rel_error;
                }
            }
            agg.success_frequency =
                agg.trials ? static_cast<double>(successes) / agg.trials : 0;
            agg.mean_rel_error = finite ? error_sum / finite
                                        : std::numeric_limits<double>::quiet_NaN();
            result.aggregates.push_back(agg);
        }
    }
    return result;
}

void write_trials_csv(std::ostream &out, const ExperimentResult &result,
                      bool with_timing) {
    out << "method,rank,trial,rel_error,success,iters,seconds\n";
    for (const auto &rec : result.trials)
        out << rec.method << ',' << rec.rank << ',' << rec.trial << ','
            << format_double(rec.rel_error) << ',' << (rec.success ? 1 : 0) << ','
            << rec.iterations << ',' << format_double(with_timing ? rec.seconds : 0.0)
            << '\n';
}

void write_aggregate_csv(std::ostream &out, const ExperimentResult &result) {
    out << "method,rank,trials,success_freq,mean_rel_error\n";
    for (const auto &agg : result.aggregates)
        out << agg.method << ',' << agg.rank << ',' << agg.trials << ','
            << format_double(agg.success_frequency) << ','
            << format_double(agg.mean_rel_error) << '\n';
}

} // namespace irnn
