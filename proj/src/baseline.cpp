#include "irnn/baseline.hpp"

#include <cmath>
#include <string>

namespace irnn {

void ConvexConfig::validate() const {
    if (continuation)
        continuation->validate();
    else if (!(lambda > 0) || !std::isfinite(lambda))
        throw ParameterError("convex: lambda must be positive");
    if (max_iters < 1)
        throw ConfigurationError("convex: max_iters must be positive");
}

SolveReport solve_convex(const SmoothLoss &loss, const ConvexConfig &config,
                         std::optional<Matrix> X0) {
    config.validate();
    const double L = loss.lipschitz();
    const double step_constant = config.step_constant.value_or(L);
    if (!(step_constant >= L) || !(step_constant > 0))
        throw ConfigurationError("convex: step constant " +
                                 std::to_string(step_constant) +
                                 " is below the Lipschitz constant " +
                                 std::to_string(L));

    LambdaSchedule schedule(config.continuation, config.lambda);
    const Index s = std::min(loss.rows(), loss.cols());

    Matrix X = X0 ? std::move(*X0) : Matrix::Zero(loss.rows(), loss.cols());
    if (X.rows() != loss.rows() || X.cols() != loss.cols())
        throw PreconditionError("convex: initial point has the wrong shape");

    SolveReport report;
    report.mu = step_constant;
    report.lipschitz = L;
    Vector sigma = singular_values(X);
    report.initial_objective = schedule.current() * sigma.sum() + loss.value(X);

    Matrix X_prev = X;
    double t = 1;
    double fit = 0;
    for (int k = 0; k < config.max_iters; ++k) {
        const double lambda = schedule.current();
        Matrix Y = X;
        double t_next = 1;
        if (config.acceleration) {
            t_next = (1 + std::sqrt(1 + 4 * t * t)) / 2;
            Y += ((t - 1) / t_next) * (X - X_prev);
        }
        const LossEval ev = loss.eval_and_gradient(Y);
        SpectralDecomposition next =
            wsvt_decompose(Y - ev.gradient / step_constant,
                           WeightVector::uniform(s, lambda / step_constant));
        Matrix X_next = next.reconstruct();
        const double step = (X_next - X).norm();
        fit = loss.value(X_next);

        report.objective_trace.push_back(lambda * next.sigma.sum() + fit);
        report.rank_trace.push_back(numerical_rank(next.sigma));
        report.step_trace.push_back(step);
        report.lambda_trace.push_back(lambda);
        report.iterations = k + 1;

        X_prev = std::move(X);
        X = std::move(X_next);
        sigma = std::move(next.sigma);
        t = t_next;
        if (config.on_iterate)
            config.on_iterate(k + 1, X);

        if (config.stop_residual > 0 &&
            std::sqrt(2 * fit) <= config.stop_residual) {
            report.termination = Termination::Residual;
            break;
        }
        if (config.tol > 0 && step <= config.tol && schedule.at_target()) {
            report.termination = Termination::Step;
            break;
        }
        if (schedule.advance(step, X.norm()))
            t = 1;
    }
    report.final_residual = std::sqrt(2 * std::max(fit, 0.0));
    report.final_X = std::move(X);
    report.final_sigma = std::move(sigma);
    return report;
}

ConvexConfig convex_noise_free_config(const CompletionProblem &problem) {
    const SolverConfig base = noise_free_config(problem);
    ConvexConfig cfg;
    cfg.continuation = base.continuation;
    cfg.stop_residual = base.stop_residual;
    cfg.tol = 1e-6 * problem.observed_norm();
    cfg.max_iters = 1500;
    return cfg;
}

ConvexConfig convex_noisy_config(const CompletionProblem &problem) {
    const SolverConfig base = noisy_config(problem);
    ConvexConfig cfg;
    cfg.continuation = base.continuation;
    cfg.tol = base.stop_step;
    cfg.max_iters = base.max_iters;
    return cfg;
}

} // namespace irnn
