#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "irnn/types.hpp"

namespace irnn {

struct LossEval {
    double value = 0;
    Matrix gradient;
};

/// Smooth loss f with Lipschitz-continuous gradient.
class SmoothLoss {
  public:
    virtual ~SmoothLoss() = default;

    virtual Index rows() const = 0;
    virtual Index cols() const = 0;

    /// f(X) and ∇f(X). Throws PreconditionError on shape mismatch.
    virtual LossEval eval_and_gradient(const Matrix &X) const = 0;
    virtual double value(const Matrix &X) const {
        return eval_and_gradient(X).value;
    }
    /// Upper bound on the Lipschitz constant of ∇f.
    virtual double lipschitz() const = 0;

    /// Data-fit residual ‖A(X) − b‖ (= √(2f) for squared losses); drives the
    /// residual stopping rule.
    double residual_norm(const Matrix &X) const;

  protected:
    void check_shape(const Matrix &X) const;
};

using Coordinate = std::pair<Index, Index>;

/// Observed index set Ω: a sorted (row-major order) coordinate list plus a
/// dense boolean view.
class ObservationMask {
  public:
    ObservationMask() = default;
    /// Throws PreconditionError on out-of-bounds or duplicate coordinates, or
    /// when the list is empty.
    ObservationMask(Index rows, Index cols, std::vector<Coordinate> coords);
    /// From a dense indicator (true = observed).
    explicit ObservationMask(const Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> &dense);
    static ObservationMask full(Index rows, Index cols);

    Index rows() const { return dense_.rows(); }
    Index cols() const { return dense_.cols(); }
    std::size_t size() const { return coords_.size(); }
    bool contains(Index i, Index j) const { return dense_(i, j); }
    const std::vector<Coordinate> &coordinates() const { return coords_; }
    const Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> &dense() const {
        return dense_;
    }

    /// P_Ω(X): entries outside Ω set to zero.
    Matrix project(const Matrix &X) const;

  private:
    std::vector<Coordinate> coords_;
    Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> dense_;
};

/// Observed entries M restricted to Ω.
class CompletionProblem {
  public:
    CompletionProblem() = default;
    /// `values[k]` is the observation at `mask.coordinates()[k]`.
    CompletionProblem(ObservationMask mask, const std::vector<double> &values);
    /// Samples a full matrix on the mask.
    CompletionProblem(ObservationMask mask, const Matrix &full);

    Index rows() const { return mask_.rows(); }
    Index cols() const { return mask_.cols(); }
    const ObservationMask &mask() const { return mask_; }
    /// Dense m×n matrix equal to M on Ω and zero elsewhere.
    const Matrix &observed() const { return observed_; }
    /// Observations in coordinate order.
    std::vector<double> observed_values() const;
    /// ‖P_Ω(M)‖_∞.
    double max_abs_observed() const;
    /// ‖P_Ω(M)‖_F.
    double observed_norm() const { return observed_.norm(); }

  private:
    ObservationMask mask_;
    Matrix observed_;
};

/// f(X) = ½‖P_Ω(X − M)‖_F², L(f) = 1.
class CompletionLoss final : public SmoothLoss {
  public:
    explicit CompletionLoss(CompletionProblem problem)
        : problem_(std::move(problem)) {}

    Index rows() const override { return problem_.rows(); }
    Index cols() const override { return problem_.cols(); }
    LossEval eval_and_gradient(const Matrix &X) const override;
    double value(const Matrix &X) const override;
    double lipschitz() const override { return 1.0; }

    const CompletionProblem &problem() const { return problem_; }

  private:
    CompletionProblem problem_;
};

/// f(X) = ½‖A(X) − b‖², ∇f(X) = A*(A(X) − b). The Lipschitz bound is supplied
/// by the caller and must dominate ρ(A*A).
class AffineLoss final : public SmoothLoss {
  public:
    using Forward = std::function<Vector(const Matrix &)>;
    using Adjoint = std::function<Matrix(const Vector &)>;

    AffineLoss(Index rows, Index cols, Forward apply, Adjoint adjoint,
               Vector offset, double lipschitz_bound);

    Index rows() const override { return rows_; }
    Index cols() const override { return cols_; }
    LossEval eval_and_gradient(const Matrix &X) const override;
    double value(const Matrix &X) const override;
    double lipschitz() const override { return lipschitz_; }

    Vector apply(const Matrix &X) const { return apply_(X); }
    Matrix adjoint(const Vector &y) const { return adjoint_(y); }
    const Vector &offset() const { return offset_; }

    /// Largest relative violation of ⟨A(X), y⟩ = ⟨X, A*(y)⟩ over random
    /// probes.
    double adjoint_mismatch(int probes, std::uint64_t seed) const;

  private:
    Index rows_, cols_;
    Forward apply_;
    Adjoint adjoint_;
    Vector offset_;
    double lipschitz_;
};

/// Power-iteration estimate of ρ(A*A). Never used implicitly; pass a safe
/// upper bound (e.g. 1.01× this) to AffineLoss.
double estimate_lipschitz(const AffineLoss::Forward &apply,
                          const AffineLoss::Adjoint &adjoint, Index rows,
                          Index cols, int iterations, std::uint64_t seed);

} // namespace irnn
