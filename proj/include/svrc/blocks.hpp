#pragma once

#include "svrc/common.hpp"

namespace svrc {

/// Tiles an image into 16x16 blocks of [0,1] values (pixel/255).
/// Partial border blocks are padded by replicating the last row/column.
BlockGrid tile_blocks(const GrayImage& img);

/// Inverse of tile_blocks: crops padding, maps v -> round(255*v) clamped
/// to [0,255]. Throws DimensionMismatch on inconsistent grids.
GrayImage assemble_blocks(const BlockGrid& grid);

}  // namespace svrc
