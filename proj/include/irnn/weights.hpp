#pragma once

#include <compare>
#include <limits>
#include <vector>

#include "irnn/types.hpp"

namespace irnn {

/// A nonnegative weight that may be +∞. Infinity is a flag, not a large float,
/// so thresholding with it produces exact zeros.
class ExtendedWeight {
  public:
    constexpr ExtendedWeight() = default;
    constexpr ExtendedWeight(double value) : value_{value} {}

    static constexpr ExtendedWeight infinity() {
        ExtendedWeight w;
        w.infinite_ = true;
        return w;
    }

    constexpr bool is_infinite() const { return infinite_; }
    /// Finite value; +inf (IEEE) when infinite.
    constexpr double value() const {
        return infinite_ ? std::numeric_limits<double>::infinity() : value_;
    }

    /// Multiply by a positive scalar; infinity is preserved.
    constexpr ExtendedWeight scaled(double factor) const {
        return infinite_ ? infinity() : ExtendedWeight{value_ * factor};
    }

    /// Extended product with a nonnegative quantity, using ∞·0 = 0.
    constexpr double times(double sigma) const {
        if (infinite_)
            return sigma == 0 ? 0.0 : std::numeric_limits<double>::infinity();
        return value_ * sigma;
    }

    friend constexpr std::partial_ordering operator<=>(const ExtendedWeight &a,
                                                       const ExtendedWeight &b) {
        if (a.infinite_ || b.infinite_) {
            if (a.infinite_ && b.infinite_)
                return std::partial_ordering::equivalent;
            return a.infinite_ ? std::partial_ordering::greater
                               : std::partial_ordering::less;
        }
        return a.value_ <=> b.value_;
    }
    friend constexpr bool operator==(const ExtendedWeight &a,
                                     const ExtendedWeight &b) {
        return (a <=> b) == std::partial_ordering::equivalent;
    }

  private:
    double value_ = 0;
    bool infinite_ = false;
};

/// Per-singular-value weights for the weighted nuclear norm. Valid vectors
/// are nonnegative and nondecreasing (extended comparison).
class WeightVector {
  public:
    WeightVector() = default;
    explicit WeightVector(std::vector<ExtendedWeight> entries)
        : entries_(std::move(entries)) {}

    /// s copies of `w`.
    static WeightVector uniform(Index s, ExtendedWeight w) {
        return WeightVector(std::vector<ExtendedWeight>(static_cast<std::size_t>(s), w));
    }

    Index size() const { return static_cast<Index>(entries_.size()); }
    const ExtendedWeight &operator[](Index i) const {
        return entries_[static_cast<std::size_t>(i)];
    }
    const std::vector<ExtendedWeight> &entries() const { return entries_; }

    bool is_valid() const;
    /// Throws PreconditionError when negative or decreasing entries are found.
    void validate() const;

    /// Every entry multiplied by `factor` (> 0).
    WeightVector scaled(double factor) const;

  private:
    std::vector<ExtendedWeight> entries_;
};

} // namespace irnn
