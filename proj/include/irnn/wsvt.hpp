#pragma once

#include <span>

#include "irnn/types.hpp"
#include "irnn/weights.hpp"

namespace irnn {

/// Thin SVD Y = U diag(sigma) Vᵀ with s = min(m, n) columns in U and V and
/// sigma sorted nonincreasing.
struct SpectralDecomposition {
    Matrix U;
    Vector sigma;
    Matrix V;

    Index rows() const { return U.rows(); }
    Index cols() const { return V.rows(); }
    /// U diag(sigma) Vᵀ, skipping trailing zero singular values.
    Matrix reconstruct() const;
};

/// Relative threshold below which singular values count as zero in rank
/// reports.
inline constexpr double kRankTolerance = 1e-12;

/// Number of singular values above rel_tol·σ₁ (sigma nonincreasing).
Index numerical_rank(const Vector &sigma, double rel_tol = kRankTolerance);

/// Thin SVD via LAPACK divide-and-conquer (falls back to the QR-iteration
/// driver if it does not converge). Works for either orientation.
/// Throws DomainError on non-finite entries and NumericalError on failure.
SpectralDecomposition svd(const Matrix &Y);

/// Singular values only.
Vector singular_values(const Matrix &Y);

/// Weighted singular value thresholding in factored form: the returned
/// decomposition has the singular vectors of Y and singular values
/// (σ_i − w_i)_+, with exact zeros wherever w_i = +∞. Because σ is
/// nonincreasing and w nondecreasing, the result is itself a valid SVD.
SpectralDecomposition wsvt_decompose(const Matrix &Y, const WeightVector &w);

/// argmin_X Σ w_i σ_i(X) + ½‖X − Y‖_F² for nondecreasing nonnegative w.
/// Throws PreconditionError on length mismatch or invalid weights.
Matrix wsvt_apply(const Matrix &Y, const WeightVector &w);

/// Σ w_i σ_i(X) with ∞·0 = 0.
double weighted_nuclear_norm(const Matrix &X, const WeightVector &w);
double weighted_nuclear_norm(const Vector &sigma, const WeightVector &w);

} // namespace irnn
