#pragma once

#include <filesystem>

#include "trisweep/plane.h"

namespace trisweep {

// PFM: 1 channel ("Pf") or 3 channels ("PF"), little-endian float32, scale
// -1.0, rows stored bottom to top. Throws kIo / kParse.
void WritePfm(const std::filesystem::path& path, const Image& image);
Image ReadPfm(const std::filesystem::path& path);

// Binary 8-bit PPM (P6) and PGM (P5). Values in [0, 1] are clamped and
// rounded to 0..255.
void WritePpm(const std::filesystem::path& path, const Image& rgb);
Image ReadPpm(const std::filesystem::path& path);
void WritePgm(const std::filesystem::path& path, const Image& gray);
Image ReadPgm(const std::filesystem::path& path);

// Mask as PGM: nonzero -> 255.
void WriteMaskPgm(const std::filesystem::path& path, const Mask& mask);
Mask ReadMaskPgm(const std::filesystem::path& path);

}  // namespace trisweep
