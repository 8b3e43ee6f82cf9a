#include "irnn/imaging.hpp"

#include <algorithm>
#include <array>
#include <exception>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <random>
#include <thread>

#include "irnn/baseline.hpp"
#include "irnn/solver.hpp"
#include "irnn/wsvt.hpp"

namespace irnn {

ImageBuffer::ImageBuffer(Index width, Index height, std::uint8_t fill)
    : width_(width), height_(height) {
    if (width < 1 || height < 1)
        throw PreconditionError("ImageBuffer: dimensions must be at least 1");
    pixels_.assign(static_cast<std::size_t>(width * height * kChannels), fill);
}

Matrix ImageBuffer::channel(int c) const {
    Matrix out(height_, width_);
    for (Index y = 0; y < height_; ++y)
        for (Index x = 0; x < width_; ++x)
            out(y, x) = at(x, y, c);
    return out;
}

void ImageBuffer::set_channel(int c, const Matrix &values) {
    if (values.rows() != height_ || values.cols() != width_)
        throw PreconditionError("set_channel: shape mismatch");
    for (Index y = 0; y < height_; ++y)
        for (Index x = 0; x < width_; ++x) {
            const double v = values(y, x);
            const double clamped = std::isnan(v) ? 0.0 : std::clamp(v, 0.0, 255.0);
            at(x, y, c) = static_cast<std::uint8_t>(std::lround(clamped));
        }
}

CorruptionMask::CorruptionMask(Index width, Index height, bool observed) {
    if (width < 1 || height < 1)
        throw PreconditionError("CorruptionMask: dimensions must be at least 1");
    observed_.setConstant(height, width, observed);
}

ObservationMask CorruptionMask::to_observation_mask() const {
    if (observed_count() == 0)
        throw PreconditionError("CorruptionMask: no observed pixels");
    return ObservationMask(observed_);
}

std::pair<ImageBuffer, CorruptionMask>
corrupt_random(const ImageBuffer &image, double fraction, std::uint64_t seed) {
    if (!(fraction > 0 && fraction < 1))
        throw PreconditionError("corrupt_random: fraction must lie in (0, 1)");
    const Index w = image.width(), h = image.height(), total = w * h;
    const auto count =
        static_cast<Index>(std::llround(fraction * static_cast<double>(total)));
    std::vector<Index> order(static_cast<std::size_t>(total));
    for (Index k = 0; k < total; ++k)
        order[static_cast<std::size_t>(k)] = k;
    std::mt19937_64 rng(seed);
    for (Index k = 0; k < count; ++k) {
        std::uniform_int_distribution<Index> pick(k, total - 1);
        std::swap(order[static_cast<std::size_t>(k)],
                  order[static_cast<std::size_t>(pick(rng))]);
    }
    ImageBuffer out = image;
    CorruptionMask mask(w, h);
    std::uniform_int_distribution<int> value(0, 255);
    for (Index k = 0; k < count; ++k) {
        const Index idx = order[static_cast<std::size_t>(k)];
        const Index x = idx % w, y = idx / w;
        mask.set_observed(x, y, false);
        for (int c = 0; c < ImageBuffer::kChannels; ++c)
            out.at(x, y, c) = static_cast<std::uint8_t>(value(rng));
    }
    return {std::move(out), std::move(mask)};
}

std::pair<ImageBuffer, CorruptionMask> apply_text_mask(const ImageBuffer &image,
                                                       const ImageBuffer &overlay) {
    if (overlay.width() != image.width() || overlay.height() != image.height())
        throw PreconditionError("apply_text_mask: mask is " +
                                std::to_string(overlay.width()) + "x" +
                                std::to_string(overlay.height()) + ", image is " +
                                std::to_string(image.width()) + "x" +
                                std::to_string(image.height()));
    ImageBuffer out = image;
    CorruptionMask mask(image.width(), image.height());
    for (Index y = 0; y < image.height(); ++y)
        for (Index x = 0; x < image.width(); ++x) {
            bool hit = false;
            for (int c = 0; c < ImageBuffer::kChannels; ++c)
                hit = hit || overlay.at(x, y, c) != 0;
            if (!hit)
                continue;
            mask.set_observed(x, y, false);
            for (int c = 0; c < ImageBuffer::kChannels; ++c)
                out.at(x, y, c) = 255;
        }
    if (mask.observed_count() == 0)
        throw PreconditionError("apply_text_mask: mask covers every pixel");
    return {std::move(out), std::move(mask)};
}

InpaintOptions InpaintOptions::preset(const MethodSpec &method) {
    InpaintOptions opt;
    opt.method = method;
    if (method.convex) {
        opt.lambda0_factor = 1;
        opt.target_factor = 0.1;
    }
    return opt;
}

void InpaintOptions::validate() const {
    if (!(lambda0_factor > 0 && std::isfinite(lambda0_factor)))
        throw ConfigurationError("inpaint: lambda0 factor must be positive");
    if (!(target_factor > 0 && target_factor <= 1))
        throw ConfigurationError("inpaint: target factor must lie in (0, 1]");
    if (!(eta > 0 && eta < 1))
        throw ConfigurationError("inpaint: eta must lie in (0, 1)");
    if (max_iters < 1)
        throw ConfigurationError("inpaint: max_iters must be at least 1");
    if (!method.convex)
        method.penalty.validate();
}

namespace {

Matrix inpaint_channel(const ImageBuffer &image, const ObservationMask &omega,
                       int c, const InpaintOptions &opt) {
    const CompletionProblem problem(omega, image.channel(c));
    const double scale = problem.max_abs_observed();
    if (scale == 0)
        return Matrix::Zero(image.height(), image.width());
    const CompletionLoss loss(problem);

    const double mean = problem.observed().sum() /
                        static_cast<double>(omega.coordinates().size());
    const Matrix X0 = omega.dense().select(
        problem.observed(), Matrix::Constant(image.height(), image.width(), mean));

    const double lambda0 = opt.lambda0_factor * scale;
    std::optional<Continuation> cont;
    if (opt.target_factor < 1) {
        cont.emplace();
        cont->lambda0 = lambda0;
        cont->lambda_target = opt.target_factor * lambda0;
        cont->eta = opt.eta;
        cont->stage_iters = 50;
        cont->stage_tol = 1e-3;
    }
    const double step_tol = 1e-4 * problem.observed_norm();

    if (opt.method.convex) {
        ConvexConfig cfg;
        cfg.lambda = lambda0;
        cfg.continuation = cont;
        cfg.max_iters = opt.max_iters;
        cfg.tol = step_tol;
        return solve_convex(loss, cfg, X0).final_X;
    }
    const Penalty pen = opt.method.penalty.with_lambda(lambda0);
    SolverConfig cfg;
    cfg.continuation = cont;
    cfg.max_iters = opt.max_iters;
    cfg.stop_step = step_tol;
    const Vector s0 = singular_values(X0);
    cfg.initial_weights =
        weights_from_singular_values(pen, std::span<const double>(s0.data(), s0.size()));
    return solve(loss, pen, cfg, X0).final_X;
}

} // namespace

ImageBuffer inpaint(const ImageBuffer &image, const CorruptionMask &mask,
                    const InpaintOptions &options) {
    if (mask.width() != image.width() || mask.height() != image.height())
        throw PreconditionError("inpaint: mask and image sizes differ");
    options.validate();
    const ObservationMask omega = mask.to_observation_mask();

    std::array<Matrix, ImageBuffer::kChannels> channels;
    std::array<std::exception_ptr, ImageBuffer::kChannels> errors{};
    auto work = [&](int c) {
        try {
            channels[static_cast<std::size_t>(c)] = inpaint_channel(image, omega, c, options);
        } catch (...) {
            errors[static_cast<std::size_t>(c)] = std::current_exception();
        }
    };
    if (options.threads <= 1) {
        for (int c = 0; c < ImageBuffer::kChannels; ++c)
            work(c);
    } else {
        std::vector<std::jthread> pool;
        for (int c = 0; c < ImageBuffer::kChannels; ++c)
            pool.emplace_back(work, c);
    }
    for (auto &e : errors)
        if (e)
            std::rethrow_exception(e);

    ImageBuffer out(image.width(), image.height());
    for (int c = 0; c < ImageBuffer::kChannels; ++c)
        out.set_channel(c, channels[static_cast<std::size_t>(c)]);
    return out;
}

double psnr(const ImageBuffer &reference, const ImageBuffer &candidate) {
    if (reference.width() != candidate.width() ||
        reference.height() != candidate.height())
        throw PreconditionError("psnr: image sizes differ");
    const auto &a = reference.pixels();
    const auto &b = candidate.pixels();
    double sse = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
        sse += d * d;
    }
    if (sse == 0)
        return std::numeric_limits<double>::infinity();
    const double mse = sse / static_cast<double>(a.size());
    return 10 * std::log10(255.0 * 255.0 / mse);
}

} // namespace irnn
