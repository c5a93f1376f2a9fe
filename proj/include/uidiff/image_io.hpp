#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "uidiff/model.hpp"

namespace uidiff {

/// Decodes any PNG colour type to RGB8; alpha is composited over white. Throws IoError.
Raster read_png(const std::filesystem::path& path);

/// Writes an RGB8 PNG with fixed compression settings and no timestamp chunk,
/// so identical rasters always produce identical files.
void write_png(const std::filesystem::path& path, const Raster& image);

/// Writes an 8-bit grayscale PNG; `values` is row-major with width*height entries.
void write_png_gray(const std::filesystem::path& path, int width, int height,
                    const std::vector<std::uint8_t>& values);

}  // namespace uidiff
