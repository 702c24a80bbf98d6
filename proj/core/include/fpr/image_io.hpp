#pragma once

#include <filesystem>

#include "fpr/types.hpp"

namespace fpr {

/// Loads an 8-bit grayscale PGM (P5 or P2) or PNG. Values land in [0,255].
ImagePlane load_image(const std::filesystem::path& path);

/// Writes PGM or PNG by extension, clipping to [0,255] and rounding.
void save_image(const ImagePlane& x, const std::filesystem::path& path);

/// Center-aligned bilinear resample to new_side x new_side.
ImagePlane resize_bilinear(const ImagePlane& x, int new_side);

}  // namespace fpr
