#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "irnn/types.hpp"
#include "irnn/weights.hpp"

namespace irnn {

/// Concave, nondecreasing surrogates of the L0 norm applied to singular values.
enum class PenaltyKind {
    Lp,
    SCAD,
    Logarithm,
    MCP,
    CappedL1,
    ETP,
    Geman,
    Laplace,
    NuclearConvex,
    TruncatedNuclear,
};

/// Lower-case CLI/config name of a kind ("lp", "scad", "capped-l1", ...).
std::string_view to_string(PenaltyKind kind);
/// Inverse of to_string. Also accepts a few aliases ("log", "cappedl1",
/// "nuclear", "tnn"). Throws ParameterError on unknown names.
PenaltyKind parse_penalty_kind(std::string_view name);
/// The eight nonconvex kinds, in table order.
std::span<const PenaltyKind> nonconvex_kinds();

/// Penalty g_λ together with its parameters.
///
/// `gamma` is the shape parameter of SCAD, Logarithm, MCP, Capped L1, ETP,
/// Geman and Laplace; `p` the exponent of Lp; `trunc_rank` the number of
/// leading singular values left unpenalized by TruncatedNuclear. For
/// TruncatedNuclear, `lambda` scales the penalized tail (λ = 1 gives the plain
/// truncated nuclear norm).
struct Penalty {
    PenaltyKind kind = PenaltyKind::Lp;
    double lambda = 1;
    double gamma = 0;
    double p = 0.5;
    Index trunc_rank = 0;

    /// Penalty with the default shape parameters for `kind`.
    static Penalty make(PenaltyKind kind, double lambda);
    static Penalty lp(double lambda, double p = 0.5);
    static Penalty scad(double lambda, double gamma = 3.7);
    static Penalty logarithm(double lambda, double gamma = 10);
    static Penalty mcp(double lambda, double gamma = 1.5);
    static Penalty capped_l1(double lambda, double gamma);
    static Penalty etp(double lambda, double gamma = 2);
    static Penalty geman(double lambda, double gamma = 1);
    static Penalty laplace(double lambda, double gamma = 1);
    static Penalty nuclear(double lambda);
    static Penalty truncated(Index rank, double lambda = 1);

    /// Copy with a different λ; shape parameters unchanged.
    Penalty with_lambda(double new_lambda) const;

    /// Throws ParameterError if the parameters are outside their valid range.
    void validate() const;
};

/// Default γ for a kind (0 for kinds without a shape parameter). Capped L1 has
/// no universal default; 1 is returned as a placeholder.
double default_gamma(PenaltyKind kind);

/// g_λ(θ). For TruncatedNuclear this is the tail branch (index > r); use
/// value_at_index for index-aware evaluation.
double value(const Penalty &penalty, double theta);

/// One element of the superdifferential ∂g_λ(θ). At kinks the right limit is
/// returned; Lp at θ = 0 returns +∞.
ExtendedWeight supergradient(const Penalty &penalty, double theta);

/// Index-aware value for the i-th singular value (0-based). Identical to
/// value() except for TruncatedNuclear, where indices below trunc_rank are
/// unpenalized.
double value_at_index(const Penalty &penalty, Index i, double theta);
ExtendedWeight supergradient_at_index(const Penalty &penalty, Index i,
                                      double theta);

/// Σ_i g(σ_i) over a singular-value vector.
double penalty_sum(const Penalty &penalty, std::span<const double> sigma);

/// Weights w_i ∈ ∂g(σ_i) for a nonincreasing singular-value vector. The
/// result is nondecreasing. Throws PreconditionError if sigma is unsorted and
/// DomainError on negative entries.
WeightVector weights_from_singular_values(const Penalty &penalty,
                                          std::span<const double> sigma);

} // namespace irnn
