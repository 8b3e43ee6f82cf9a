#include "irnn/penalty.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <string>

namespace irnn {

namespace {

constexpr std::array kNonconvexKinds{
    PenaltyKind::Lp,       PenaltyKind::SCAD, PenaltyKind::Logarithm,
    PenaltyKind::MCP,      PenaltyKind::CappedL1, PenaltyKind::ETP,
    PenaltyKind::Geman,    PenaltyKind::Laplace,
};

void check_theta(double theta) {
    if (!(theta >= 0) || !std::isfinite(theta))
        throw DomainError("penalty argument must be finite and nonnegative, got " +
                          std::to_string(theta));
}

bool is_penalized_index(const Penalty &penalty, Index i) {
    return penalty.kind != PenaltyKind::TruncatedNuclear ||
           i >= penalty.trunc_rank;
}

} // namespace

std::string_view to_string(PenaltyKind kind) {
    switch (kind) {
    case PenaltyKind::Lp: return "lp";
    case PenaltyKind::SCAD: return "scad";
    case PenaltyKind::Logarithm: return "logarithm";
    case PenaltyKind::MCP: return "mcp";
    case PenaltyKind::CappedL1: return "capped-l1";
    case PenaltyKind::ETP: return "etp";
    case PenaltyKind::Geman: return "geman";
    case PenaltyKind::Laplace: return "laplace";
    case PenaltyKind::NuclearConvex: return "nuclear";
    case PenaltyKind::TruncatedNuclear: return "truncated";
    }
    return "unknown";
}

PenaltyKind parse_penalty_kind(std::string_view name) {
    std::string s(name);
    for (auto &c : s)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (s == "lp") return PenaltyKind::Lp;
    if (s == "scad") return PenaltyKind::SCAD;
    if (s == "logarithm" || s == "log") return PenaltyKind::Logarithm;
    if (s == "mcp") return PenaltyKind::MCP;
    if (s == "capped-l1" || s == "cappedl1" || s == "capped_l1")
        return PenaltyKind::CappedL1;
    if (s == "etp") return PenaltyKind::ETP;
    if (s == "geman") return PenaltyKind::Geman;
    if (s == "laplace") return PenaltyKind::Laplace;
    if (s == "nuclear" || s == "nuclear-convex" || s == "convex")
        return PenaltyKind::NuclearConvex;
    if (s == "truncated" || s == "tnn" || s == "truncated-nuclear")
        return PenaltyKind::TruncatedNuclear;
    throw ParameterError("unknown penalty kind '" + std::string(name) + "'");
}

std::span<const PenaltyKind> nonconvex_kinds() { return kNonconvexKinds; }

double default_gamma(PenaltyKind kind) {
    switch (kind) {
    case PenaltyKind::SCAD: return 3.7;
    case PenaltyKind::Logarithm: return 10;
    case PenaltyKind::MCP: return 1.5;
    case PenaltyKind::CappedL1: return 1;
    case PenaltyKind::ETP: return 2;
    case PenaltyKind::Geman: return 1;
    case PenaltyKind::Laplace: return 1;
    default: return 0;
    }
}

Penalty Penalty::make(PenaltyKind kind, double lambda) {
    Penalty pen;
    pen.kind = kind;
    pen.lambda = lambda;
    pen.gamma = default_gamma(kind);
    pen.validate();
    return pen;
}

Penalty Penalty::lp(double lambda, double p) {
    Penalty pen{PenaltyKind::Lp, lambda, 0, p, 0};
    pen.validate();
    return pen;
}

#define IRNN_GAMMA_FACTORY(fn, KIND)                                           \
    Penalty Penalty::fn(double lambda, double gamma) {                         \
        Penalty pen{PenaltyKind::KIND, lambda, gamma, 0.5, 0};                  \
        pen.validate();                                                        \
        return pen;                                                            \
    }
IRNN_GAMMA_FACTORY(scad, SCAD)
IRNN_GAMMA_FACTORY(logarithm, Logarithm)
IRNN_GAMMA_FACTORY(mcp, MCP)
IRNN_GAMMA_FACTORY(capped_l1, CappedL1)
IRNN_GAMMA_FACTORY(etp, ETP)
IRNN_GAMMA_FACTORY(geman, Geman)
IRNN_GAMMA_FACTORY(laplace, Laplace)
#undef IRNN_GAMMA_FACTORY

Penalty Penalty::nuclear(double lambda) {
    Penalty pen{PenaltyKind::NuclearConvex, lambda, 0, 0.5, 0};
    pen.validate();
    return pen;
}

Penalty Penalty::truncated(Index rank, double lambda) {
    Penalty pen{PenaltyKind::TruncatedNuclear, lambda, 0, 0.5, rank};
    pen.validate();
    return pen;
}

Penalty Penalty::with_lambda(double new_lambda) const {
    Penalty pen = *this;
    pen.lambda = new_lambda;
    pen.validate();
    return pen;
}

void Penalty::validate() const {
    auto fail = [this](const std::string &what) {
        throw ParameterError(std::string(to_string(kind)) + " penalty: " + what);
    };
    if (!(lambda > 0) || !std::isfinite(lambda))
        fail("lambda must be positive and finite");
    switch (kind) {
    case PenaltyKind::Lp:
        if (!(p > 0 && p < 1))
            fail("p must lie in (0, 1)");
        break;
    case PenaltyKind::SCAD:
        if (!(gamma > 1) || !std::isfinite(gamma))
            fail("gamma must be greater than 1");
        break;
    case PenaltyKind::Logarithm:
    case PenaltyKind::MCP:
    case PenaltyKind::CappedL1:
    case PenaltyKind::ETP:
    case PenaltyKind::Geman:
    case PenaltyKind::Laplace:
        if (!(gamma > 0) || !std::isfinite(gamma))
            fail("gamma must be positive");
        break;
    case PenaltyKind::NuclearConvex:
        break;
    case PenaltyKind::TruncatedNuclear:
        if (trunc_rank < 0)
            fail("truncation rank must be nonnegative");
        break;
    }
}

double value(const Penalty &pen, double theta) {
    check_theta(theta);
    const double lam = pen.lambda, gam = pen.gamma;
    switch (pen.kind) {
    case PenaltyKind::Lp:
        return lam * std::pow(theta, pen.p);
    case PenaltyKind::SCAD: {
        if (theta <= lam)
            return lam * theta;
        const double cap = lam * lam * (gam + 1) / 2;
        if (theta <= gam * lam) {
            const double d = theta - lam;
            return std::min(lam * theta - d * d / (2 * (gam - 1)), cap);
        }
        return cap;
    }
    case PenaltyKind::Logarithm:
        return lam / std::log1p(gam) * std::log1p(gam * theta);
    case PenaltyKind::MCP: {
        const double cap = gam * lam * lam / 2;
        if (theta < gam * lam)
            return std::min(lam * theta - theta * theta / (2 * gam), cap);
        return cap;
    }
    case PenaltyKind::CappedL1:
        return theta < gam ? lam * theta : lam * gam;
    case PenaltyKind::ETP:
        return lam / -std::expm1(-gam) * -std::expm1(-gam * theta);
    case PenaltyKind::Geman:
        return lam * theta / (theta + gam);
    case PenaltyKind::Laplace:
        return lam * -std::expm1(-theta / gam);
    case PenaltyKind::NuclearConvex:
    case PenaltyKind::TruncatedNuclear:
        return lam * theta;
    }
    return 0;
}

ExtendedWeight supergradient(const Penalty &pen, double theta) {
    check_theta(theta);
    const double lam = pen.lambda, gam = pen.gamma;
    switch (pen.kind) {
    case PenaltyKind::Lp:
        if (theta == 0)
            return ExtendedWeight::infinity();
        return lam * pen.p * std::pow(theta, pen.p - 1);
    case PenaltyKind::SCAD:
        if (theta <= lam)
            return lam;
        if (theta <= gam * lam)
            return (gam * lam - theta) / (gam - 1);
        return 0.0;
    case PenaltyKind::Logarithm:
        return gam * lam / ((gam * theta + 1) * std::log1p(gam));
    case PenaltyKind::MCP:
        if (theta < gam * lam)
            return std::max(lam - theta / gam, 0.0);
        return 0.0;
    case PenaltyKind::CappedL1:
        // ∂g(γ) = [0, λ]; the right limit 0 is selected.
        return theta < gam ? lam : 0.0;
    case PenaltyKind::ETP:
        return lam * gam / -std::expm1(-gam) * std::exp(-gam * theta);
    case PenaltyKind::Geman:
        return lam * gam / ((theta + gam) * (theta + gam));
    case PenaltyKind::Laplace:
        return lam / gam * std::exp(-theta / gam);
    case PenaltyKind::NuclearConvex:
    case PenaltyKind::TruncatedNuclear:
        return lam;
    }
    return 0.0;
}

double value_at_index(const Penalty &pen, Index i, double theta) {
    if (!is_penalized_index(pen, i)) {
        check_theta(theta);
        return 0;
    }
    return value(pen, theta);
}

ExtendedWeight supergradient_at_index(const Penalty &pen, Index i,
                                      double theta) {
    if (!is_penalized_index(pen, i)) {
        check_theta(theta);
        return 0.0;
    }
    return supergradient(pen, theta);
}

double penalty_sum(const Penalty &pen, std::span<const double> sigma) {
    double total = 0;
    for (std::size_t i = 0; i < sigma.size(); ++i)
        total += value_at_index(pen, static_cast<Index>(i), sigma[i]);
    return total;
}

WeightVector weights_from_singular_values(const Penalty &pen,
                                          std::span<const double> sigma) {
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        check_theta(sigma[i]);
        if (i > 0 && sigma[i] > sigma[i - 1])
            throw PreconditionError(
                "singular values must be sorted in nonincreasing order");
    }
    std::vector<ExtendedWeight> w;
    w.reserve(sigma.size());
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        ExtendedWeight wi =
            supergradient_at_index(pen, static_cast<Index>(i), sigma[i]);
        // Exact arithmetic already gives w_{i-1} ≤ w_i; this absorbs last-ulp
        // disagreements from pow/exp.
        if (!w.empty() && wi < w.back())
            wi = w.back();
        w.push_back(wi);
    }
    return WeightVector(std::move(w));
}

} // namespace irnn
