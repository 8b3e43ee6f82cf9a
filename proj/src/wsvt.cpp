#include "irnn/wsvt.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <lapacke.h>

namespace irnn {

bool WeightVector::is_valid() const {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto &w = entries_[i];
        if (!w.is_infinite() && !(w.value() >= 0))
            return false;
        if (i > 0 && w < entries_[i - 1])
            return false;
    }
    return true;
}

void WeightVector::validate() const {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto &w = entries_[i];
        if (!w.is_infinite() && !(w.value() >= 0))
            throw PreconditionError("weight " + std::to_string(i) +
                                    " is negative or NaN");
        if (i > 0 && w < entries_[i - 1])
            throw PreconditionError("weights must be nondecreasing (entry " +
                                    std::to_string(i) + ")");
    }
}

WeightVector WeightVector::scaled(double factor) const {
    std::vector<ExtendedWeight> out;
    out.reserve(entries_.size());
    for (const auto &w : entries_)
        out.push_back(w.scaled(factor));
    return WeightVector(std::move(out));
}

Matrix SpectralDecomposition::reconstruct() const {
    Index k = 0;
    while (k < sigma.size() && sigma(k) > 0)
        ++k;
    if (k == 0)
        return Matrix::Zero(rows(), cols());
    return U.leftCols(k) * sigma.head(k).asDiagonal() * V.leftCols(k).transpose();
}

Index numerical_rank(const Vector &sigma, double rel_tol) {
    if (sigma.size() == 0 || !(sigma(0) > 0))
        return 0;
    const double cut = rel_tol * sigma(0);
    Index r = 0;
    for (Index i = 0; i < sigma.size(); ++i)
        if (sigma(i) > cut)
            ++r;
    return r;
}

namespace {

void check_finite(const Matrix &Y) {
    if (!Y.allFinite())
        throw DomainError("svd: matrix has non-finite entries");
}

} // namespace

SpectralDecomposition svd(const Matrix &Y) {
    check_finite(Y);
    const lapack_int m = static_cast<lapack_int>(Y.rows());
    const lapack_int n = static_cast<lapack_int>(Y.cols());
    const lapack_int s = std::min(m, n);
    SpectralDecomposition out;
    out.U.resize(m, s);
    out.sigma.resize(s);
    Matrix Vt(s, n);
    if (s == 0) {
        out.V.resize(n, 0);
        return out;
    }
    Matrix work = Y;
    lapack_int info =
        LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'S', m, n, work.data(), m,
                       out.sigma.data(), out.U.data(), m, Vt.data(), s);
    if (info > 0) {
        work = Y;
        Vector superb(std::max<lapack_int>(s - 1, 1));
        info = LAPACKE_dgesvd(LAPACK_COL_MAJOR, 'S', 'S', m, n, work.data(), m,
                              out.sigma.data(), out.U.data(), m, Vt.data(), s,
                              superb.data());
    }
    if (info != 0)
        throw NumericalError("svd: LAPACK returned info = " +
                             std::to_string(info));
    out.V = Vt.transpose();
    return out;
}

Vector singular_values(const Matrix &Y) {
    check_finite(Y);
    const lapack_int m = static_cast<lapack_int>(Y.rows());
    const lapack_int n = static_cast<lapack_int>(Y.cols());
    Vector sigma(std::min(m, n));
    if (sigma.size() == 0)
        return sigma;
    Matrix work = Y;
    const lapack_int info =
        LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'N', m, n, work.data(), m,
                       sigma.data(), nullptr, 1, nullptr, 1);
    if (info != 0)
        throw NumericalError("singular_values: LAPACK returned info = " +
                             std::to_string(info));
    return sigma;
}

SpectralDecomposition wsvt_decompose(const Matrix &Y, const WeightVector &w) {
    if (w.size() != std::min(Y.rows(), Y.cols()))
        throw PreconditionError("wsvt: weight length " + std::to_string(w.size()) +
                                " does not match min(m, n) = " +
                                std::to_string(std::min(Y.rows(), Y.cols())));
    w.validate();
    SpectralDecomposition dec = svd(Y);
    for (Index i = 0; i < dec.sigma.size(); ++i) {
        if (w[i].is_infinite())
            dec.sigma(i) = 0;
        else
            dec.sigma(i) = std::max(dec.sigma(i) - w[i].value(), 0.0);
    }
    return dec;
}

Matrix wsvt_apply(const Matrix &Y, const WeightVector &w) {
    return wsvt_decompose(Y, w).reconstruct();
}

double weighted_nuclear_norm(const Vector &sigma, const WeightVector &w) {
    if (w.size() != sigma.size())
        throw PreconditionError("weighted_nuclear_norm: length mismatch");
    w.validate();
    double total = 0;
    for (Index i = 0; i < sigma.size(); ++i)
        total += w[i].times(sigma(i));
    return total;
}

double weighted_nuclear_norm(const Matrix &X, const WeightVector &w) {
    if (w.size() != std::min(X.rows(), X.cols()))
        throw PreconditionError("weighted_nuclear_norm: length mismatch");
    return weighted_nuclear_norm(singular_values(X), w);
}

} // namespace irnn
