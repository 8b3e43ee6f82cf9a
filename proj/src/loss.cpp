#include "irnn/loss.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace irnn {

namespace {

Matrix random_matrix(Index rows, Index cols, std::mt19937_64 &rng) {
    std::normal_distribution<double> normal;
    Matrix X(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i)
            X(i, j) = normal(rng);
    return X;
}

} // namespace

double SmoothLoss::residual_norm(const Matrix &X) const {
    return std::sqrt(2 * std::max(value(X), 0.0));
}

void SmoothLoss::check_shape(const Matrix &X) const {
    if (X.rows() != rows() || X.cols() != cols())
        throw PreconditionError("loss: expected " + std::to_string(rows()) + "x" +
                                std::to_string(cols()) + " matrix, got " +
                                std::to_string(X.rows()) + "x" +
                                std::to_string(X.cols()));
}

ObservationMask::ObservationMask(Index rows, Index cols,
                                 std::vector<Coordinate> coords)
    : coords_(std::move(coords)),
      dense_(Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(
          rows, cols, false)) {
    if (rows <= 0 || cols <= 0)
        throw PreconditionError("mask: shape must be positive");
    if (coords_.empty())
        throw PreconditionError("mask: at least one observed entry is required");
    std::sort(coords_.begin(), coords_.end());
    for (std::size_t k = 0; k < coords_.size(); ++k) {
        const auto [i, j] = coords_[k];
        if (i < 0 || i >= rows || j < 0 || j >= cols)
            throw PreconditionError("mask: coordinate (" + std::to_string(i) +
                                    ", " + std::to_string(j) + ") out of bounds");
        if (k > 0 && coords_[k - 1] == coords_[k])
            throw PreconditionError("mask: duplicate coordinate (" +
                                    std::to_string(i) + ", " +
                                    std::to_string(j) + ")");
        dense_(i, j) = true;
    }
}

ObservationMask::ObservationMask(
    const Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> &dense)
    : dense_(dense) {
    for (Index i = 0; i < dense.rows(); ++i)
        for (Index j = 0; j < dense.cols(); ++j)
            if (dense(i, j))
                coords_.emplace_back(i, j);
    if (coords_.empty())
        throw PreconditionError("mask: at least one observed entry is required");
}

ObservationMask ObservationMask::full(Index rows, Index cols) {
    return ObservationMask(
        Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(rows, cols,
                                                                     true));
}

Matrix ObservationMask::project(const Matrix &X) const {
    if (X.rows() != rows() || X.cols() != cols())
        throw PreconditionError("mask: projection shape mismatch");
    return dense_.select(X, 0.0);
}

CompletionProblem::CompletionProblem(ObservationMask mask,
                                     const std::vector<double> &values)
    : mask_(std::move(mask)), observed_(Matrix::Zero(mask_.rows(), mask_.cols())) {
    if (values.size() != mask_.size())
        throw PreconditionError("completion problem: " +
                                std::to_string(values.size()) + " values for " +
                                std::to_string(mask_.size()) + " coordinates");
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (!std::isfinite(values[k]))
            throw DomainError("completion problem: non-finite observation");
        const auto [i, j] = mask_.coordinates()[k];
        observed_(i, j) = values[k];
    }
}

CompletionProblem::CompletionProblem(ObservationMask mask, const Matrix &full)
    : mask_(std::move(mask)) {
    observed_ = mask_.project(full);
}

std::vector<double> CompletionProblem::observed_values() const {
    std::vector<double> out;
    out.reserve(mask_.size());
    for (const auto &[i, j] : mask_.coordinates())
        out.push_back(observed_(i, j));
    return out;
}

double CompletionProblem::max_abs_observed() const {
    return observed_.cwiseAbs().maxCoeff();
}

LossEval CompletionLoss::eval_and_gradient(const Matrix &X) const {
    check_shape(X);
    LossEval out;
    out.gradient = problem_.mask().dense().select(X - problem_.observed(), 0.0);
    out.value = 0.5 * out.gradient.squaredNorm();
    return out;
}

double CompletionLoss::value(const Matrix &X) const {
    check_shape(X);
    return 0.5 *
           problem_.mask().dense().select(X - problem_.observed(), 0.0).squaredNorm();
}

AffineLoss::AffineLoss(Index rows, Index cols, Forward apply, Adjoint adjoint,
                       Vector offset, double lipschitz_bound)
    : rows_(rows), cols_(cols), apply_(std::move(apply)),
      adjoint_(std::move(adjoint)), offset_(std::move(offset)),
      lipschitz_(lipschitz_bound) {
    if (rows <= 0 || cols <= 0)
        throw PreconditionError("affine loss: shape must be positive");
    if (!apply_ || !adjoint_)
        throw PreconditionError("affine loss: operator and adjoint are required");
    if (!(lipschitz_bound > 0) || !std::isfinite(lipschitz_bound))
        throw ParameterError("affine loss: Lipschitz bound must be positive");
}

LossEval AffineLoss::eval_and_gradient(const Matrix &X) const {
    check_shape(X);
    const Vector r = apply_(X) - offset_;
    return {0.5 * r.squaredNorm(), adjoint_(r)};
}

double AffineLoss::value(const Matrix &X) const {
    check_shape(X);
    return 0.5 * (apply_(X) - offset_).squaredNorm();
}

double AffineLoss::adjoint_mismatch(int probes, std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    double worst = 0;
    for (int t = 0; t < probes; ++t) {
        const Matrix X = random_matrix(rows_, cols_, rng);
        Vector y(offset_.size());
        for (Index k = 0; k < y.size(); ++k)
            y(k) = normal(rng);
        const double lhs = apply_(X).dot(y);
        const double rhs = (X.array() * adjoint_(y).array()).sum();
        const double scale = std::max({std::abs(lhs), std::abs(rhs), 1.0});
        worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
    return worst;
}

double estimate_lipschitz(const AffineLoss::Forward &apply,
                          const AffineLoss::Adjoint &adjoint, Index rows,
                          Index cols, int iterations, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Matrix X = random_matrix(rows, cols, rng);
    X /= X.norm();
    double rho = 0;
    for (int it = 0; it < iterations; ++it) {
        Matrix Y = adjoint(apply(X));
        rho = Y.norm();
        if (rho == 0)
            return 0;
        X = Y / rho;
    }
    return rho;
}

} // namespace irnn
