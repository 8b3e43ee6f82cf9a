#include "irnn/solver.hpp"

#include <cmath>
#include <ostream>
#include <sstream>
#include <string>

#include "irnn/matrix_io.hpp"

namespace irnn {

double Continuation::at(int stage) const {
    return std::max(std::pow(eta, stage) * lambda0, lambda_target);
}

void Continuation::validate() const {
    if (!(lambda0 > 0) || !std::isfinite(lambda0))
        throw ConfigurationError("continuation: lambda0 must be positive");
    if (!(lambda_target > 0) || lambda_target > lambda0)
        throw ConfigurationError(
            "continuation: lambda_target must lie in (0, lambda0]");
    if (!(eta > 0 && eta < 1))
        throw ConfigurationError("continuation: eta must lie in (0, 1)");
    if (stage_iters < 1)
        throw ConfigurationError("continuation: stage_iters must be positive");
    if (!(stage_tol >= 0))
        throw ConfigurationError("continuation: stage_tol must be nonnegative");
}

LambdaSchedule::LambdaSchedule(const std::optional<Continuation> &continuation,
                               double fixed_lambda)
    : continuation_(continuation) {
    if (continuation_) {
        continuation_->validate();
        lambda_ = continuation_->at(0);
        target_ = continuation_->lambda_target;
    } else {
        lambda_ = target_ = fixed_lambda;
    }
}

bool LambdaSchedule::advance(double step, double x_norm) {
    if (!continuation_ || at_target())
        return false;
    ++in_stage_;
    const bool settled = continuation_->stage_tol > 0 &&
                         step <= continuation_->stage_tol * std::max(1.0, x_norm);
    if (in_stage_ < continuation_->stage_iters && !settled)
        return false;
    ++stage_;
    in_stage_ = 0;
    lambda_ = continuation_->at(stage_);
    return true;
}

std::string_view to_string(Termination t) {
    switch (t) {
    case Termination::Residual: return "residual";
    case Termination::Step: return "step";
    case Termination::MaxIters: return "max_iters";
    }
    return "unknown";
}

void write_report_csv(std::ostream &out, const SolveReport &report) {
    out << "iter,lambda,objective,rank,step\n";
    for (std::size_t k = 0; k < report.objective_trace.size(); ++k)
        out << k + 1 << ',' << format_double(report.lambda_trace[k]) << ','
            << format_double(report.objective_trace[k]) << ','
            << report.rank_trace[k] << ',' << format_double(report.step_trace[k])
            << '\n';
}

namespace {

double penalty_sum(const Penalty &penalty, const Vector &sigma) {
    return irnn::penalty_sum(
        penalty, std::span<const double>(sigma.data(), static_cast<std::size_t>(sigma.size())));
}

WeightVector weights_for(const Penalty &penalty, const Vector &sigma) {
    return weights_from_singular_values(
        penalty, std::span<const double>(sigma.data(), static_cast<std::size_t>(sigma.size())));
}

bool sigma_independent(PenaltyKind kind) {
    return kind == PenaltyKind::NuclearConvex ||
           kind == PenaltyKind::TruncatedNuclear;
}

} // namespace

double objective(const SmoothLoss &loss, const Penalty &penalty,
                 const Matrix &X) {
    penalty.validate();
    const double fit = loss.value(X);
    return penalty_sum(penalty, singular_values(X)) + fit;
}

Matrix irnn_step(const SmoothLoss &loss, const Matrix &X, const WeightVector &w,
                 double mu) {
    if (!(mu > 0))
        throw ConfigurationError("irnn_step: mu must be positive");
    const LossEval ev = loss.eval_and_gradient(X);
    return wsvt_apply(X - ev.gradient / mu, w.scaled(1 / mu));
}

SolveReport solve(const SmoothLoss &loss, const Penalty &penalty,
                  const SolverConfig &config, std::optional<Matrix> X0) {
    penalty.validate();
    const double L = loss.lipschitz();
    if (!(config.mu > L))
        throw ConfigurationError("solve: mu = " + std::to_string(config.mu) +
                                 " must exceed the Lipschitz constant " +
                                 std::to_string(L));
    if (config.max_iters < 1)
        throw ConfigurationError("solve: max_iters must be positive");
    LambdaSchedule schedule(config.continuation, penalty.lambda);

    const Index s = std::min(loss.rows(), loss.cols());
    Matrix X = X0 ? std::move(*X0) : Matrix::Zero(loss.rows(), loss.cols());
    if (X.rows() != loss.rows() || X.cols() != loss.cols())
        throw PreconditionError("solve: initial point has the wrong shape");

    SolveReport report;
    report.mu = config.mu;
    report.lipschitz = L;

    LossEval ev = loss.eval_and_gradient(X);
    Vector sigma = singular_values(X);
    Penalty current = penalty.with_lambda(schedule.current());
    report.initial_objective = penalty_sum(current, sigma) + ev.value;

    WeightVector w;
    if (config.initial_weights) {
        w = *config.initial_weights;
        if (w.size() != s)
            throw PreconditionError("solve: initial weights have length " +
                                    std::to_string(w.size()) + ", expected " +
                                    std::to_string(s));
        w.validate();
    } else if (sigma_independent(penalty.kind)) {
        w = weights_for(current, sigma);
    } else {
        w = WeightVector::uniform(s, current.lambda);
    }

    const double descent_rate = (config.mu - L) / 2;
    for (int k = 0; k < config.max_iters; ++k) {
        if (k > 0) {
            if (current.lambda != schedule.current())
                current = penalty.with_lambda(schedule.current());
            w = weights_for(current, sigma);
        }
        // F at X^k under this iteration's λ; the weights are supergradients
        // there for every k ≥ 1.
        const double f_before = penalty_sum(current, sigma) + ev.value;

        SpectralDecomposition next =
            wsvt_decompose(X - ev.gradient / config.mu, w.scaled(1 / config.mu));
        Matrix X_next = next.reconstruct();
        const double step = (X_next - X).norm();
        LossEval ev_next = loss.eval_and_gradient(X_next);
        const double f_after = penalty_sum(current, next.sigma) + ev_next.value;

        if (config.check_descent && k >= 1) {
            const double slack =
                config.descent_tolerance * std::max(1.0, std::abs(f_before));
            if (f_before - f_after < descent_rate * step * step - slack) {
                std::ostringstream msg;
                msg << "solve: descent violated at iteration " << k
                    << ": F(X^k) - F(X^k+1) = " << f_before - f_after
                    << " < " << descent_rate * step * step;
                throw ConsistencyError(msg.str());
            }
        }

        report.objective_trace.push_back(f_after);
        report.rank_trace.push_back(numerical_rank(next.sigma));
        report.step_trace.push_back(step);
        report.lambda_trace.push_back(current.lambda);
        report.iterations = k + 1;

        X = std::move(X_next);
        sigma = std::move(next.sigma);
        ev = std::move(ev_next);
        if (config.on_iterate)
            config.on_iterate(k + 1, X);

        const double residual = std::sqrt(2 * ev.value);
        if (config.stop_residual > 0 && residual <= config.stop_residual) {
            report.termination = Termination::Residual;
            break;
        }
        if (config.stop_step > 0 && step <= config.stop_step &&
            schedule.at_target()) {
            report.termination = Termination::Step;
            break;
        }
        schedule.advance(step, X.norm());
    }

    report.final_residual = std::sqrt(2 * ev.value);
    report.final_X = std::move(X);
    report.final_sigma = std::move(sigma);
    return report;
}

SolveReport solve_truncated(const SmoothLoss &loss, Index trunc_rank,
                            const SolverConfig &config, std::optional<Matrix> X0,
                            double lambda) {
    return solve(loss, Penalty::truncated(trunc_rank, lambda), config,
                 std::move(X0));
}

SolverConfig noise_free_config(const CompletionProblem &problem) {
    SolverConfig cfg;
    cfg.mu = 1.1;
    const double lambda0 = problem.max_abs_observed();
    if (!(lambda0 > 0))
        throw ConfigurationError("noise_free_config: observations are all zero");
    cfg.continuation = Continuation{lambda0, 0.7, 1e-5 * lambda0, 200, 1e-4};
    cfg.stop_residual = 1e-5;
    cfg.stop_step = 1e-7 * problem.observed_norm();
    cfg.max_iters = 3000;
    return cfg;
}

SolverConfig noisy_config(const CompletionProblem &problem) {
    SolverConfig cfg;
    cfg.mu = 1.1;
    const double lambda0 = 10 * problem.max_abs_observed();
    if (!(lambda0 > 0))
        throw ConfigurationError("noisy_config: observations are all zero");
    cfg.continuation = Continuation{lambda0, 0.7, 0.1 * lambda0, 200, 1e-4};
    cfg.stop_step = 1e-5 * problem.observed_norm();
    cfg.max_iters = 3000;
    cfg.initial_weights =
        WeightVector::uniform(std::min(problem.rows(), problem.cols()), 0.0);
    return cfg;
}

} // namespace irnn
