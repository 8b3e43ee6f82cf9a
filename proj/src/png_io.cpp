#include <png.h>

#include <cstring>
#include <string>

#include "irnn/imaging.hpp"

namespace irnn {

ImageBuffer read_png(const std::filesystem::path &path) {
    png_image img;
    std::memset(&img, 0, sizeof img);
    img.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&img, path.string().c_str()))
        throw NumericalError("read_png: " + path.string() + ": " + img.message);
    img.format = PNG_FORMAT_RGB;
    if (img.width == 0 || img.height == 0) {
        png_image_free(&img);
        throw PreconditionError("read_png: empty image");
    }
    ImageBuffer out(static_cast<Index>(img.width), static_cast<Index>(img.height));
    png_color black{0, 0, 0};
    if (!png_image_finish_read(&img, &black, out.pixels().data(), 0, nullptr)) {
        std::string msg = img.message;
        png_image_free(&img);
        throw NumericalError("read_png: " + path.string() + ": " + msg);
    }
    return out;
}

namespace {

void write_raw(const std::filesystem::path &path, Index width, Index height,
               png_uint_32 format, const void *data) {
    png_image img;
    std::memset(&img, 0, sizeof img);
    img.version = PNG_IMAGE_VERSION;
    img.width = static_cast<png_uint_32>(width);
    img.height = static_cast<png_uint_32>(height);
    img.format = format;
    if (!png_image_write_to_file(&img, path.string().c_str(), 0, data, 0, nullptr))
        throw NumericalError("write_png: " + path.string() + ": " + img.message);
}

} // namespace

void write_png(const std::filesystem::path &path, const ImageBuffer &image) {
    if (image.width() < 1 || image.height() < 1)
        throw PreconditionError("write_png: empty image");
    write_raw(path, image.width(), image.height(), PNG_FORMAT_RGB,
              image.pixels().data());
}

void write_mask_png(const std::filesystem::path &path, const CorruptionMask &mask) {
    std::vector<std::uint8_t> gray(static_cast<std::size_t>(mask.width() * mask.height()));
    for (Index y = 0; y < mask.height(); ++y)
        for (Index x = 0; x < mask.width(); ++x)
            gray[static_cast<std::size_t>(y * mask.width() + x)] =
                mask.observed(x, y) ? 0 : 255;
    write_raw(path, mask.width(), mask.height(), PNG_FORMAT_GRAY, gray.data());
}

} // namespace irnn
