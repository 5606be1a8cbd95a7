#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace svrc {

inline constexpr int kBlockSize = 16;                      // block edge in pixels
inline constexpr int kBlockCells = kBlockSize * kBlockSize;

/// One 16x16 tile of real values, row-major: cell (i,j) -> values[i*16+j].
/// Holds pixels, DCT coefficients or normalized responses depending on stage.
using Block = std::array<double, kBlockCells>;

enum class ErrorCode {
  UnsupportedFormat,
  Truncated,
  DimensionMismatch,
  SingularSystem,
  NoConvergence,
  BadMagic,
  VersionMismatch,
  ParamDigestMismatch,
  CorruptPayload,
  ZeroMatrix,
  TooSmall,
  RaggedData,
  InvalidArgument,
  IoError,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

/// 8-bit monochrome raster, row-major.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> samples;

  std::uint8_t at(int y, int x) const { return samples[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t& at(int y, int x) { return samples[static_cast<std::size_t>(y) * width + x]; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
};

/// Image tiled into 16x16 blocks of [0,1] values, padded by edge replication.
struct BlockGrid {
  int cols = 0;
  int rows = 0;
  int orig_width = 0;
  int orig_height = 0;
  std::vector<Block> blocks;  // raster order, rows of blocks top to bottom
};

}  // namespace svrc
