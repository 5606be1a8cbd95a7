#include "svrc/blocks.hpp"

#include <algorithm>
#include <cmath>

namespace svrc {

BlockGrid tile_blocks(const GrayImage& img) {
  if (img.width < 1 || img.height < 1 || img.samples.size() != img.pixel_count())
    fail(ErrorCode::DimensionMismatch, "inconsistent image dimensions");

  BlockGrid grid;
  grid.orig_width = img.width;
  grid.orig_height = img.height;
  grid.cols = (img.width + kBlockSize - 1) / kBlockSize;
  grid.rows = (img.height + kBlockSize - 1) / kBlockSize;
  grid.blocks.resize(static_cast<std::size_t>(grid.cols) * grid.rows);

  for (int br = 0; br < grid.rows; ++br) {
    for (int bc = 0; bc < grid.cols; ++bc) {
      Block& b = grid.blocks[static_cast<std::size_t>(br) * grid.cols + bc];
      for (int i = 0; i < kBlockSize; ++i) {
        int y = std::min(br * kBlockSize + i, img.height - 1);
        for (int j = 0; j < kBlockSize; ++j) {
          int x = std::min(bc * kBlockSize + j, img.width - 1);
          b[i * kBlockSize + j] = img.at(y, x) / 255.0;
        }
      }
    }
  }
  return grid;
}

GrayImage assemble_blocks(const BlockGrid& grid) {
  if (grid.cols < 1 || grid.rows < 1 ||
      grid.blocks.size() != static_cast<std::size_t>(grid.cols) * grid.rows ||
      grid.orig_width < 1 || grid.orig_height < 1 ||
      grid.cols * kBlockSize < grid.orig_width || grid.rows * kBlockSize < grid.orig_height)
    fail(ErrorCode::DimensionMismatch, "inconsistent block grid");

  GrayImage img;
  img.width = grid.orig_width;
  img.height = grid.orig_height;
  img.samples.resize(img.pixel_count());

  for (int y = 0; y < img.height; ++y) {
    int br = y / kBlockSize, i = y % kBlockSize;
    for (int x = 0; x < img.width; ++x) {
      int bc = x / kBlockSize, j = x % kBlockSize;
      double v = grid.blocks[static_cast<std::size_t>(br) * grid.cols + bc][i * kBlockSize + j];
      double scaled = std::round(v * 255.0);
      img.at(y, x) = static_cast<std::uint8_t>(std::clamp(scaled, 0.0, 255.0));
    }
  }
  return img;
}

}  // namespace svrc
