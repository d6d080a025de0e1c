#pragma once

#include <string>

#include "surftrack/image.hpp"

namespace surftrack {

// Decodes a PNG or JPEG file (detected by magic bytes) into 8-bit RGB.
ImageRGB load_image(const std::string& path);

// Writes 8-bit RGB PNG; samples are clamped to [0, 255] and rounded.
void save_png(const std::string& path, const ImageRGB& img);

}  // namespace surftrack
