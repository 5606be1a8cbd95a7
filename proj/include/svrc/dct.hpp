#pragma once

#include "svrc/common.hpp"

namespace svrc {

/// Orthonormal 2D type-II DCT of a 16x16 block. Cell (i,j) of the result is
/// the coefficient at vertical frequency index i, horizontal index j; (0,0)
/// is DC. Preserves the Euclidean norm.
Block dct2_forward(const Block& block);

/// Exact inverse of dct2_forward.
Block dct2_inverse(const Block& coeffs);

}  // namespace svrc
