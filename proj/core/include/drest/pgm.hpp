#pragma once

#include "drest/types.hpp"

#include <string>

namespace drest {

/// Reads an 8-bit grayscale PGM (binary P5 or ASCII P2) into real intensities
/// 0..255. Color PNM files and maxval > 255 are rejected with a descriptive
/// std::runtime_error, as are truncated or otherwise corrupt files.
Image load_image(const std::string& path);

/// Rounds to nearest integer and writes a binary (P5) PGM with maxval 255.
/// With clamp, values are clipped into [0, 255]; without it, any rounded
/// value outside that range throws std::invalid_argument since P5 cannot
/// represent it.
void save_image(const Image& img, const std::string& path, bool clamp = true);

}  // namespace drest
