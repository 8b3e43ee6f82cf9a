#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "irnn/loss.hpp"
#include "irnn/penalty.hpp"
#include "irnn/types.hpp"
#include "irnn/wsvt.hpp"

namespace irnn {

/// Geometric λ schedule λ_j = max(η^j λ₀, λ_t), where j counts stages. A
/// stage ends after `stage_iters` iterations or as soon as
/// ‖X^{k+1} − X^k‖_F ≤ stage_tol · max(1, ‖X^{k+1}‖_F), whichever comes
/// first. stage_iters = 1 decreases λ on every iteration.
struct Continuation {
    double lambda0 = 1;
    double eta = 0.7;
    double lambda_target = 1e-5;
    int stage_iters = 200;
    double stage_tol = 1e-5;

    /// λ at stage j.
    double at(int stage) const;
    void validate() const;
};

/// Runtime state of a (possibly fixed) λ schedule.
class LambdaSchedule {
  public:
    LambdaSchedule(const std::optional<Continuation> &continuation,
                   double fixed_lambda);

    double current() const { return lambda_; }
    double target() const { return target_; }
    bool at_target() const { return lambda_ <= target_; }
    int stage() const { return stage_; }
    /// Record one iteration; returns true if λ changed.
    bool advance(double step, double x_norm);

  private:
    std::optional<Continuation> continuation_;
    double lambda_;
    double target_;
    int stage_ = 0;
    int in_stage_ = 0;
};

struct SolverConfig {
    /// Proximal constant μ; must exceed the Lipschitz constant of ∇f.
    double mu = 1.1;
    /// When unset, λ is held at the penalty's own λ (fixed-λ mode).
    std::optional<Continuation> continuation;
    int max_iters = 500;
    /// Stop once ‖A(X) − b‖ (‖P_Ω(X − M)‖_F for completion) falls to this
    /// value. 0 disables.
    double stop_residual = 0;
    /// Stop once ‖X^{k+1} − X^k‖_F falls to this value after λ has reached
    /// its target. 0 disables.
    double stop_step = 0;
    /// Weights for the first step. Defaults to λ₀ on every singular value
    /// (a plain SVT step); penalties whose supergradient does not depend on σ
    /// (nuclear, truncated) use their supergradient instead.
    std::optional<WeightVector> initial_weights;
    /// Verify F(X^k) − F(X^{k+1}) ≥ (μ − L)/2 ‖X^k − X^{k+1}‖² for k ≥ 1 and
    /// throw ConsistencyError on violation.
    bool check_descent = true;
    /// Slack for the descent check, relative to max(1, |F(X^k)|).
    double descent_tolerance = 1e-8;
    /// Called after every iteration with (k + 1, X^{k+1}).
    std::function<void(int, const Matrix &)> on_iterate;
};

enum class Termination { Residual, Step, MaxIters };
std::string_view to_string(Termination t);

/// Per-iteration traces; entry k describes X^{k+1}, the output of iteration
/// k, and lambda_trace[k] is the λ used to build the weights of that step.
struct SolveReport {
    Matrix final_X;
    /// Singular values of final_X as produced by the last thresholding step
    /// (exact zeros preserved).
    Vector final_sigma;
    std::vector<double> objective_trace;
    std::vector<Index> rank_trace;
    std::vector<double> step_trace;
    std::vector<double> lambda_trace;
    int iterations = 0;
    Termination termination = Termination::MaxIters;
    /// F(X⁰) at the first λ.
    double initial_objective = 0;
    double mu = 0;
    double lipschitz = 0;
    double final_residual = 0;
};

/// CSV with header `iter,lambda,objective,rank,step`, iter starting at 1.
void write_report_csv(std::ostream &out, const SolveReport &report);

/// F(X) = Σ g_λ(σ_i(X)) + f(X).
double objective(const SmoothLoss &loss, const Penalty &penalty, const Matrix &X);

/// One proximal-linearized step: WSVT of X − ∇f(X)/μ with weights w/μ.
Matrix irnn_step(const SmoothLoss &loss, const Matrix &X, const WeightVector &w,
                 double mu);

/// Iteratively reweighted nuclear norm. X0 defaults to the zero matrix.
/// Throws ConfigurationError when μ ≤ L(f) or the schedule is invalid, and
/// ConsistencyError if a guaranteed descent is observed to fail.
SolveReport solve(const SmoothLoss &loss, const Penalty &penalty,
                  const SolverConfig &config,
                  std::optional<Matrix> X0 = std::nullopt);

/// solve() with the truncated nuclear norm Σ_{i>r} λσ_i.
SolveReport solve_truncated(const SmoothLoss &loss, Index trunc_rank,
                            const SolverConfig &config,
                            std::optional<Matrix> X0 = std::nullopt,
                            double lambda = 1);

/// Completion defaults for exact observations: μ = 1.1, λ₀ = ‖P_Ω(M)‖_∞,
/// λ_t = 1e-5 λ₀, η = 0.7, stop when ‖P_Ω(X − M)‖_F ≤ 1e-5.
SolverConfig noise_free_config(const CompletionProblem &problem);
/// Completion defaults for noisy observations: λ₀ = 10‖P_Ω(M)‖_∞,
/// λ_t = 0.1 λ₀, η = 0.7, stop when the step falls below 1e-5‖P_Ω(M)‖_F or
/// after 500 iterations.
SolverConfig noisy_config(const CompletionProblem &problem);

} // namespace irnn
