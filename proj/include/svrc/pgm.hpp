#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "svrc/common.hpp"

namespace svrc {

/// Parses a binary PGM (P5, maxval 255) byte stream. Header comments ('#')
/// are allowed. Throws UnsupportedFormat / Truncated.
GrayImage load_pgm(const std::vector<std::uint8_t>& bytes);

GrayImage load_pgm_file(const std::string& path);

std::vector<std::uint8_t> save_pgm(const GrayImage& img);

void save_pgm_file(const GrayImage& img, const std::string& path);

}  // namespace svrc
