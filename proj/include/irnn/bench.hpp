#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "irnn/loss.hpp"
#include "irnn/penalty.hpp"
#include "irnn/types.hpp"

namespace irnn {

/// m×n product of two standard-normal factors (m×r and r×n) drawn from a
/// generator seeded with `seed`. Throws PreconditionError unless
/// 0 ≤ r ≤ min(m, n).
Matrix gen_lowrank(Index m, Index n, Index r, std::uint64_t seed);

/// Exactly round(fraction·m·n) distinct entries chosen uniformly at random.
/// Throws PreconditionError if fraction ∉ (0, 1] or the mask would be empty.
ObservationMask sample_mask(Index m, Index n, double fraction,
                            std::uint64_t seed);

/// values + sigma·N(0, 1), entrywise.
std::vector<double> add_noise(std::vector<double> values, double sigma,
                              std::uint64_t seed);

/// ‖X̂ − M‖_F / ‖M‖_F. Throws DomainError when M = 0.
double relative_error(const Matrix &X_hat, const Matrix &M);

/// SplitMix64 finalizer; used to derive independent per-trial seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

/// A solver to benchmark: IRNN with a penalty, or the convex baseline.
struct MethodSpec {
    std::string label;
    bool convex = false;
    /// Kind and shape parameters; λ is set by the schedule.
    Penalty penalty;

    static MethodSpec irnn(Penalty penalty, std::string label = {});
    static MethodSpec convex_baseline();
    /// "convex" or a penalty kind name (Lp uses p = 0.1 unless overridden).
    static MethodSpec parse(const std::string &name);
};

/// Shape parameters used by the experiment presets. Tuned on the desk-scale
/// grid; Lp uses a smaller exponent than the library-wide default.
Penalty benchmark_penalty(PenaltyKind kind);

enum class Schedule { Auto, NoiseFree, Noisy };

struct ExperimentSpec {
    Index m = 60, n = 60;
    std::vector<Index> ranks{3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    int trials = 20;
    double observe_fraction = 0.5;
    double noise_sigma = 0;
    std::vector<MethodSpec> methods;
    std::uint64_t seed = 0;
    double success_threshold = 1e-3;
    /// Auto picks NoiseFree when noise_sigma = 0.
    Schedule schedule = Schedule::Auto;
    /// Overrides the preset iteration cap.
    std::optional<int> max_iters;
    /// Worker threads; 0 means hardware concurrency.
    unsigned threads = 0;

    void validate() const;
};

struct TrialRecord {
    std::string method;
    Index rank = 0;
    int trial = 0;
    double rel_error = 0;
    bool success = false;
    int iterations = 0;
    double seconds = 0;
    /// Non-empty when the solver threw.
    std::string error;
};

struct AggregateRecord {
    std::string method;
    Index rank = 0;
    int trials = 0;
    double success_frequency = 0;
    /// Over trials that did not fail.
    double mean_rel_error = 0;
};

struct ExperimentResult {
    /// Ordered by (rank, trial, method index).
    std::vector<TrialRecord> trials;
    /// Ordered by (method index, rank).
    std::vector<AggregateRecord> aggregates;

    const AggregateRecord &aggregate(const std::string &method, Index rank) const;
};

/// Data for one trial, reproducible from (spec.seed, rank, trial).
struct TrialData {
    Matrix truth;
    CompletionProblem problem;
};
TrialData make_trial(const ExperimentSpec &spec, Index rank, int trial);

/// Runs every method on every (rank, trial). Solver exceptions are recorded
/// per trial.
ExperimentResult run_experiment(const ExperimentSpec &spec);

/// `method,rank,trial,rel_error,success,iters,seconds`. Wall times are
/// written only when `with_timing` is set (0 otherwise) so that reruns are
/// byte-identical.
void write_trials_csv(std::ostream &out, const ExperimentResult &result,
                      bool with_timing = false);
/// `method,rank,trials,success_freq,mean_rel_error`.
void write_aggregate_csv(std::ostream &out, const ExperimentResult &result);

} // namespace irnn
