#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "irnn/bench.hpp"
#include "irnn/loss.hpp"
#include "irnn/types.hpp"

namespace irnn {

/// 8-bit RGB image, row-major with interleaved channels.
class ImageBuffer {
  public:
    static constexpr int kChannels = 3;

    ImageBuffer() = default;
    ImageBuffer(Index width, Index height, std::uint8_t fill = 0);

    Index width() const { return width_; }
    Index height() const { return height_; }
    std::uint8_t &at(Index x, Index y, int c) {
        return pixels_[offset(x, y, c)];
    }
    std::uint8_t at(Index x, Index y, int c) const {
        return pixels_[offset(x, y, c)];
    }
    std::vector<std::uint8_t> &pixels() { return pixels_; }
    const std::vector<std::uint8_t> &pixels() const { return pixels_; }

    /// Channel c as a height×width real matrix with values in [0, 255].
    Matrix channel(int c) const;
    /// Writes a channel back, rounding and clamping to [0, 255].
    void set_channel(int c, const Matrix &values);

    friend bool operator==(const ImageBuffer &, const ImageBuffer &) = default;

  private:
    std::size_t offset(Index x, Index y, int c) const {
        return static_cast<std::size_t>((y * width_ + x) * kChannels + c);
    }

    Index width_ = 0, height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

/// Per-pixel observation flags shared by all channels (true = clean).
class CorruptionMask {
  public:
    CorruptionMask() = default;
    CorruptionMask(Index width, Index height, bool observed = true);

    Index width() const { return observed_.cols(); }
    Index height() const { return observed_.rows(); }
    bool observed(Index x, Index y) const { return observed_(y, x); }
    void set_observed(Index x, Index y, bool value) { observed_(y, x) = value; }
    Index observed_count() const { return observed_.count(); }

    /// Observation set for a height×width channel matrix. Throws
    /// PreconditionError when nothing is observed.
    ObservationMask to_observation_mask() const;

  private:
    Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> observed_;
};

/// Reads any PNG as 8-bit RGB (gray and palette images are expanded, alpha
/// is composited onto black).
ImageBuffer read_png(const std::filesystem::path &path);
void write_png(const std::filesystem::path &path, const ImageBuffer &image);
/// Writes the mask as a gray PNG (255 = corrupted).
void write_mask_png(const std::filesystem::path &path, const CorruptionMask &mask);

/// Replaces round(fraction·W·H) uniformly chosen pixels with independent
/// uniform values on every channel; those pixels are marked unobserved.
std::pair<ImageBuffer, CorruptionMask>
corrupt_random(const ImageBuffer &image, double fraction, std::uint64_t seed);

/// Marks every pixel where `overlay` is nonzero (any channel) as corrupted
/// and paints it white in the returned image. Throws PreconditionError on a
/// size mismatch or when the overlay covers every pixel.
std::pair<ImageBuffer, CorruptionMask> apply_text_mask(const ImageBuffer &image,
                                                       const ImageBuffer &overlay);

struct InpaintOptions {
    MethodSpec method = MethodSpec::irnn(Penalty::lp(1, 0.5));
    /// λ₀ = lambda0_factor · ‖P_Ω(M)‖_∞ per channel.
    double lambda0_factor = 8;
    /// λ_t = target_factor · λ₀; 1 keeps λ fixed.
    double target_factor = 1;
    double eta = 0.7;
    int max_iters = 500;
    /// Worker threads for the three channel solves (1 = sequential).
    unsigned threads = 1;

    /// Presets per method family, tuned on a separate image: IRNN uses a
    /// fixed λ = 8‖P_Ω(M)‖_∞, the convex baseline decreases λ from
    /// ‖P_Ω(M)‖_∞ to a tenth of it.
    static InpaintOptions preset(const MethodSpec &method);
    void validate() const;
};

/// Matrix completion per channel on the observed pixels, results clamped
/// to [0, 255]. Every output pixel comes from the recovered matrix, observed
/// ones included. Each channel starts from its observed pixels with the
/// missing ones set to the observed mean; IRNN takes its first weights from
/// the singular values of that start.
ImageBuffer inpaint(const ImageBuffer &image, const CorruptionMask &mask,
                    const InpaintOptions &options = {});

/// 10·log₁₀(255² / MSE) over all pixels and channels; +∞ for identical
/// images. Throws PreconditionError on a size mismatch.
double psnr(const ImageBuffer &reference, const ImageBuffer &candidate);

} // namespace irnn
