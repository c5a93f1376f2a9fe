#include "uidiff/image_io.hpp"

#include <png.h>

#include <cstring>

namespace uidiff {

namespace {

void write_image(const std::filesystem::path& path, int width, int height, png_uint_32 format,
                 const std::uint8_t* data) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(width);
    image.height = static_cast<png_uint_32>(height);
    image.format = format;
    if (!png_image_write_to_file(&image, path.c_str(), 0, data, 0, nullptr)) {
        const std::string message = image.message;
        png_image_free(&image);
        throw IoError("writing '" + path.string() + "': " + message);
    }
}

}  // namespace

Raster read_png(const std::filesystem::path& path) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.c_str())) {
        throw IoError("reading '" + path.string() + "': " + image.message);
    }
    image.format = PNG_FORMAT_RGB;
    std::vector<std::uint8_t> pixels(PNG_IMAGE_SIZE(image));
    // Transparent pixels are composited over white.
    png_color background{255, 255, 255};
    if (!png_image_finish_read(&image, &background, pixels.data(), 0, nullptr)) {
        const std::string message = image.message;
        png_image_free(&image);
        throw IoError("decoding '" + path.string() + "': " + message);
    }
    return Raster(static_cast<int>(image.width), static_cast<int>(image.height),
                  std::move(pixels));
}

void write_png(const std::filesystem::path& path, const Raster& image) {
    write_image(path, image.width(), image.height(), PNG_FORMAT_RGB, image.pixels().data());
}

void write_png_gray(const std::filesystem::path& path, int width, int height,
                    const std::vector<std::uint8_t>& values) {
    if (values.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw IoError("grayscale buffer does not match image size");
    }
    write_image(path, width, height, PNG_FORMAT_GRAY, values.data());
}

}  // namespace uidiff
