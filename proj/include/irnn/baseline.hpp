#pragma once

#include <optional>

#include "irnn/loss.hpp"
#include "irnn/solver.hpp"
#include "irnn/types.hpp"

namespace irnn {

/// Convex comparison solver for min λ‖X‖_* + f(X): (accelerated) proximal
/// gradient with the fixed step 1/L(f), optionally with the same geometric
/// λ continuation as the nonconvex solver. No line search.
struct ConvexConfig {
    /// λ in fixed mode; ignored when a continuation is set.
    double lambda = 1;
    std::optional<Continuation> continuation;
    int max_iters = 500;
    /// Stop when ‖X^{k+1} − X^k‖_F ≤ tol once λ is at its target. 0 disables.
    double tol = 0;
    /// Stop when ‖A(X) − b‖ ≤ stop_residual. 0 disables.
    double stop_residual = 0;
    /// Nesterov/FISTA momentum.
    bool acceleration = true;
    /// Step constant; defaults to L(f). Must be ≥ L(f).
    std::optional<double> step_constant;
    /// Called after every iteration with (k + 1, X^{k+1}).
    std::function<void(int, const Matrix &)> on_iterate;

    void validate() const;
};

/// Objective λ‖X‖_* + f(X) is reported in objective_trace.
SolveReport solve_convex(const SmoothLoss &loss, const ConvexConfig &config,
                         std::optional<Matrix> X0 = std::nullopt);

/// Convex counterparts of noise_free_config / noisy_config (same λ schedule
/// and stopping rules).
ConvexConfig convex_noise_free_config(const CompletionProblem &problem);
ConvexConfig convex_noisy_config(const CompletionProblem &problem);

} // namespace irnn
